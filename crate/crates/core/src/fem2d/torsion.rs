use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use super::mesh::Mesh2D;
use super::sparse::EnvelopeCholesky;
use crate::error::Result;

/// Solution of `−Δu = 1`, `u = 0` on the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionResult {
    /// Nodal values over all mesh vertices.
    pub u: Vec<f64>,
    /// `P(Ω) = ∫ u`.
    pub rigidity: f64,
    pub min_value: f64,
}

pub fn torsion_solve(mesh: &Mesh2D) -> Result<TorsionResult> {
    let sys = assemble(mesh)?;
    let factor = EnvelopeCholesky::factor(&sys.stiffness)?;
    let x = factor.solve(&sys.load);
    // ∫ u_h = Σ u_i ∫ φ_i
    let rigidity = x.iter().zip(&sys.load).map(|(a, b)| a * b).sum();
    let u = sys.dofs.extend(&x);
    let min_value = u.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TorsionResult { u, rigidity, min_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::{triangulate_convex, ConvexDomain2D};
    use std::f64::consts::PI;

    /// `P = (64/π⁶) Σ_{p,q odd} 1/(p² q² (p² + q²))` for the unit square,
    /// from the sine series of the torsion function.
    fn square_rigidity_series() -> f64 {
        let mut s = 0.0;
        for p in (1..4000).step_by(2) {
            for q in (1..4000).step_by(2) {
                let (p2, q2) = ((p * p) as f64, (q * q) as f64);
                s += 1.0 / (p2 * q2 * (p2 + q2));
            }
        }
        64.0 / PI.powi(6) * s
    }

    #[test]
    fn disk_and_scaling() {
        let d = ConvexDomain2D::disk(1.0).unwrap();
        let t1 = torsion_solve(&triangulate_convex(&d, 0.05).unwrap()).unwrap();
        assert!((t1.rigidity / (PI / 8.0) - 1.0).abs() < 0.01, "{}", t1.rigidity);
        assert!(t1.min_value >= -1e-10);
        let t2 = torsion_solve(&triangulate_convex(&d.scaled(2.0).unwrap(), 0.1).unwrap()).unwrap();
        assert!((t2.rigidity / (2.0 * PI) - 1.0).abs() < 0.01);
        assert!((t2.rigidity / t1.rigidity / 16.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn square_against_series() {
        let want = square_rigidity_series();
        assert!((want - 0.0351442).abs() < 1e-6, "{want}");
        let t = torsion_solve(&triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.05).unwrap()).unwrap();
        assert!((t.rigidity / want - 1.0).abs() < 0.01, "{}", t.rigidity);
    }
}
