use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Check;
use crate::ball_spectrum::ball_eigenvalues;
use crate::bounds::{torsion_bound_constant, torsion_eigenvalue_lower_bound};
use crate::error::{domain, Error, Result};
use crate::fem2d::{triangulate_convex, torsion_solve, ConvexDomain2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorsionShape {
    /// The unit disk.
    Disk,
    /// The unit square.
    Square,
}

impl fmt::Display for TorsionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionShape::Disk => "disk",
            TorsionShape::Square => "square",
        })
    }
}

impl FromStr for TorsionShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(TorsionShape::Disk),
            "square" => Ok(TorsionShape::Square),
            _ => domain(format!("unknown shape {s:?}, expected disk or square")),
        }
    }
}

impl TorsionShape {
    fn domain(self, scale: f64) -> Result<ConvexDomain2D> {
        match self {
            TorsionShape::Disk => ConvexDomain2D::disk(scale),
            TorsionShape::Square => ConvexDomain2D::square(scale),
        }
    }

    /// Torsional rigidity of the unit shape.
    pub fn exact_rigidity(self) -> f64 {
        match self {
            TorsionShape::Disk => PI / 8.0,
            TorsionShape::Square => {
                // sine series of the torsion function, odd p and q only
                let mut s = 0.0;
                for p in (1..2000u32).step_by(2) {
                    let p2 = f64::from(p * p);
                    for q in (1..2000u32).step_by(2) {
                        let q2 = f64::from(q * q);
                        s += 1.0 / (p2 * q2 * (p2 + q2));
                    }
                }
                64.0 / PI.powi(6) * s
            }
        }
    }

    /// The first `count` Dirichlet eigenvalues of the unit shape.
    pub fn exact_eigenvalues(self, count: usize) -> Result<Vec<f64>> {
        match self {
            TorsionShape::Disk => Ok(ball_eigenvalues(2, count)?.values()),
            TorsionShape::Square => {
                let side = (count as f64).sqrt().ceil() as usize + 2;
                let mut v: Vec<f64> = (1..=side)
                    .flat_map(|p| (1..=side).map(move |q| PI * PI * (p * p + q * q) as f64))
                    .collect();
                v.sort_by(f64::total_cmp);
                v.truncate(count);
                Ok(v)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionCheckReport {
    pub shape: TorsionShape,
    pub target_h: f64,
    pub mesh_h: f64,
    pub vertices: usize,
    pub rigidity: f64,
    pub exact_rigidity: f64,
    /// Rigidity of the shape dilated by 2, meshed at the same `h`.
    pub rigidity_doubled: f64,
    pub scaling_ratio: f64,
    pub bound_constant: f64,
    /// `(k, lower bound from the FEM rigidity, exact λ_k)`.
    pub bounds: Vec<(usize, f64, f64)>,
    pub checks: Vec<Check>,
}

impl TorsionCheckReport {
    pub fn passed(&self) -> bool {
        super::all_passed(&self.checks)
    }
}

/// Torsional rigidity of the unit disk or square by FEM, its `r⁴` scaling,
/// and the eigenvalue lower bound `λ_k ≥ c(2) P^{−1/2} k^{1/2}` checked
/// against the exact spectrum for `k = 1, …, k_max`.
pub fn torsion_check(shape: TorsionShape, h: f64, k_max: usize) -> Result<TorsionCheckReport> {
    if k_max == 0 {
        return domain("k_max must be at least 1");
    }
    let mesh = triangulate_convex(&shape.domain(1.0)?, h)?;
    let t = torsion_solve(&mesh)?;
    let t2 = torsion_solve(&triangulate_convex(&shape.domain(2.0)?, h)?)?;
    let exact_rigidity = shape.exact_rigidity();
    let scaling_ratio = t2.rigidity / t.rigidity;
    let c = torsion_bound_constant(2);
    let exact = shape.exact_eigenvalues(k_max)?;
    // the FEM rigidity sits below the true one, which only raises the bound
    let bounds = (1..=k_max)
        .map(|k| Ok((k, torsion_eigenvalue_lower_bound(2, k, t.rigidity)?, exact[k - 1])))
        .collect::<Result<Vec<_>>>()?;
    let worst = bounds.iter().map(|(_, b, l)| b / l).fold(0.0, f64::max);
    let rel = t.rigidity / exact_rigidity - 1.0;
    let checks = vec![
        Check::new("rigidity", rel.abs() <= 0.01, format!("{:.8} vs {:.8} ({:+.4}%)", t.rigidity, exact_rigidity, 100.0 * rel)),
        Check::new("scaling", (scaling_ratio / 16.0 - 1.0).abs() <= 0.02, format!("P(2Ω)/P(Ω) = {scaling_ratio:.6}")),
        Check::new(
            "bound_constant",
            (c - (2.0 * PI).sqrt() / 2.0).abs() <= 1e-10,
            format!("c(2) = {c:.15}"),
        ),
        Check::new("eigenvalue_bound", worst <= 1.0, format!("max bound/λ_k = {worst:.6} over k ≤ {k_max}")),
        Check::new("nonnegative", t.min_value >= -1e-12, format!("min u = {:e}", t.min_value)),
    ];
    Ok(TorsionCheckReport {
        shape,
        target_h: h,
        mesh_h: mesh.h,
        vertices: mesh.vertex_count(),
        rigidity: t.rigidity,
        exact_rigidity,
        rigidity_doubled: t2.rigidity,
        scaling_ratio,
        bound_constant: c,
        bounds,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_spectrum_listing() {
        let v = TorsionShape::Square.exact_eigenvalues(4).unwrap();
        let pi2 = PI * PI;
        assert_eq!(v, vec![2.0 * pi2, 5.0 * pi2, 5.0 * pi2, 8.0 * pi2]);
    }

    #[test]
    fn coarse_square_check_passes() {
        let r = torsion_check(TorsionShape::Square, 0.05, 20).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn parses_shapes() {
        assert_eq!("disk".parse::<TorsionShape>().unwrap(), TorsionShape::Disk);
        assert!("ball".parse::<TorsionShape>().is_err());
    }
}
