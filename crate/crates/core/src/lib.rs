//! Dirichlet eigenvalues of the Laplacian under boundary-measure, volume and
//! torsional-rigidity constraints.
//!
//! The crate is organised bottom-up:
//!
//! - [`bessel`]: Bessel functions `J_ν` of real order and their positive zeros.
//! - [`ball_spectrum`]: the Dirichlet spectrum of the unit ball in `R^m`.
//! - [`bounds`]: isoperimetric eigenvalue bounds, component-count bounds and
//!   the tables and configuration enumerations derived from them.
//! - [`fem2d`]: planar P1 finite elements (meshing, eigenvalues, torsion).
//! - [`experiments`]: numerical experiments built on the above, including a
//!   perimeter-constrained shape optimizer.
//! - [`cli`]: the command-line front end used by the `dirichlet-eigen` binary.

pub mod ball_spectrum;
pub mod bessel;
pub mod bounds;
pub mod cli;
mod error;
pub mod experiments;
pub mod fem2d;
pub mod quadrature;

pub use ball_spectrum::{ball_eigenvalues, harmonic_multiplicity, BallSpectrum};
pub use bessel::{asymptotic_bracket, bessel_j, nth_zero, AsymptoticBracket, BesselZero, Order};
pub use error::{Error, Result};
