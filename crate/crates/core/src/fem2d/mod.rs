//! Planar P1 finite elements on convex domains: meshing, the Dirichlet
//! eigenproblem `K x = λ M x`, and the torsion problem `−Δu = 1`.

mod assemble;
mod domain;
mod eigen;
mod mesh;
pub mod sparse;
mod torsion;

pub use assemble::{assemble, DofMap, FemSystem};
pub use domain::{shape_metrics, Boundary, BoundaryMap, ConvexDomain2D, Curve, Point};
pub use eigen::{dirichlet_eigs, dirichlet_eigs_with, EigenOptions, EigenSolution, DEFAULT_EIGEN_TOL};
pub use mesh::{triangulate_convex, Mesh2D};
pub use torsion::{torsion_solve, TorsionResult};
