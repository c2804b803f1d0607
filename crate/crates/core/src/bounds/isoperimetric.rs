use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use super::{ln_sphere_area, ConstraintFunctional, ConstraintKind};
use crate::ball_spectrum::ground_zero;
use crate::bessel::DEFAULT_ZERO_TOL;
use crate::error::{domain, Result};

/// Lower bound on `λ_k(Ω)`, `k ∈ {1, 2}`, over every `Ω` satisfying the
/// constraint.
///
/// For a `β`-homogeneous functional `T` this is
/// `λ₁(B_m) (T(B_m)/budget)^{2/β}`, times `2^{2/β}` when `k = 2`. The boundary
/// measure goes through the isoperimetric inequality for volume, so the
/// ratio keeps exponent `2/(m−1)` but the `k = 2` factor is `2^{2/m}`.
pub fn isoperimetric_lower_bound(k: usize, constraint: &ConstraintFunctional) -> Result<f64> {
    if !(k == 1 || k == 2) {
        return domain(format!("isoperimetric bound is available for k = 1, 2 only, got {k}"));
    }
    let m = constraint.dimension;
    let j = ground_zero(m, DEFAULT_ZERO_TOL * 1e-2)?.value;
    let ln_ratio = constraint.ln_unit_ball_value() - constraint.budget.ln();
    let mut ln_bound = 2.0 * j.ln() + 2.0 / constraint.beta * ln_ratio;
    if k == 2 {
        let split_beta = match constraint.kind {
            ConstraintKind::HausdorffBoundary => m as f64,
            _ => constraint.beta,
        };
        ln_bound += 2.0 / split_beta * LN_2;
    }
    Ok(ln_bound.exp())
}

/// Bracket on the infimum of `λ₂(Ω) H^{m−1}(∂Ω)^{2/(m−1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda2StarEstimate {
    pub dimension: usize,
    pub lower: f64,
    pub upper: f64,
    /// First-order coefficient in `2^{2/m} = 1 + (log 4)/m + O(m⁻²)`.
    pub expansion_coeff: f64,
    /// `upper / lower = 2^{2/(m(m−1))}`.
    pub gap: f64,
}

/// Lower bound from Krahn–Szegő plus the isoperimetric inequality; upper
/// bound from two disjoint equal balls.
pub fn lambda2_star_bounds(m: usize) -> Result<Lambda2StarEstimate> {
    if m < 2 {
        return domain(format!("dimension must be at least 2, got {m}"));
    }
    let mf = m as f64;
    let j = ground_zero(m, DEFAULT_ZERO_TOL * 1e-2)?.value;
    let ln_common = 2.0 * j.ln() + 2.0 / (mf - 1.0) * ln_sphere_area(m);
    let lower = (ln_common + 2.0 / mf * LN_2).exp();
    let upper = (ln_common + 2.0 / (mf - 1.0) * LN_2).exp();
    Ok(Lambda2StarEstimate {
        dimension: m,
        lower,
        upper,
        expansion_coeff: 4f64.ln(),
        gap: (2.0 / (mf * (mf - 1.0)) * LN_2).exp(),
    })
}

/// `c(m) = (m+2)⁻¹ (4π)^{m/(m+2)} (2Γ((m+2)/2))^{2/(m+2)}`.
pub fn torsion_bound_constant(m: usize) -> f64 {
    let mf = m as f64;
    let p = mf + 2.0;
    let ln_c = -p.ln() + mf / p * (4.0 * PI).ln() + 2.0 / p * (LN_2 + libm::lgamma(0.5 * p));
    ln_c.exp()
}

/// `λ_k(Ω) ≥ c(m) P(Ω)^{−2/(m+2)} k^{2/(m+2)}` for torsional rigidity `P(Ω)`.
pub fn torsion_eigenvalue_lower_bound(m: usize, k: usize, torsion: f64) -> Result<f64> {
    if m < 2 {
        return domain(format!("dimension must be at least 2, got {m}"));
    }
    if k == 0 {
        return domain("k must be at least 1");
    }
    if !(torsion.is_finite() && torsion > 0.0) {
        return domain(format!("torsional rigidity must be positive, got {torsion}"));
    }
    let e = 2.0 / (m as f64 + 2.0);
    Ok(torsion_bound_constant(m) * torsion.powf(-e) * (k as f64).powf(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball_spectrum::ball_eigenvalues;
    use crate::bounds::{ball_torsion, ball_volume};

    const J0: f64 = 2.404_825_557_695_773;

    #[test]
    fn planar_disk_is_the_equality_case() {
        let c = ConstraintFunctional::hausdorff(2, 2.0 * PI).unwrap();
        let v = isoperimetric_lower_bound(1, &c).unwrap();
        assert!((v - J0 * J0).abs() <= 1e-10 * J0 * J0);
    }

    #[test]
    fn second_eigenvalue_factors() {
        let c = ConstraintFunctional::hausdorff(2, 1.0).unwrap();
        let want = 2.0 * J0 * J0 * (2.0 * PI).powi(2);
        assert!((isoperimetric_lower_bound(2, &c).unwrap() - want).abs() < 1e-9 * want);

        let c = ConstraintFunctional::lebesgue(3, ball_volume(3)).unwrap();
        let want = 2f64.powf(2.0 / 3.0) * PI * PI;
        assert!((isoperimetric_lower_bound(2, &c).unwrap() - want).abs() < 1e-9 * want);

        assert!(isoperimetric_lower_bound(3, &c).is_err());
    }

    #[test]
    fn lambda2_star_planar_values() {
        let e = lambda2_star_bounds(2).unwrap();
        let base = J0 * J0 * (2.0 * PI).powi(2);
        assert!((e.lower - 2.0 * base).abs() < 1e-9 * base);
        assert!((e.upper - 4.0 * base).abs() < 1e-9 * base);
        for m in 2..=200 {
            let e = lambda2_star_bounds(m).unwrap();
            assert!(e.lower <= e.upper);
            assert!((e.upper / e.lower - e.gap).abs() < 1e-12 * e.gap);
        }
    }

    #[test]
    fn expansion_remainder() {
        for m in 4..=10_000usize {
            let mf = m as f64;
            let rem = (2f64.powf(2.0 / mf) - (1.0 + 4f64.ln() / mf)).abs();
            assert!(rem <= 4.0 / (mf * mf), "m={m}");
        }
    }

    #[test]
    fn torsion_constant_and_bound() {
        let c2 = torsion_bound_constant(2);
        assert!((c2 - (2.0 * PI).sqrt() / 2.0).abs() < 1e-14);
        let b = torsion_eigenvalue_lower_bound(2, 1, PI / 8.0).unwrap();
        assert!((b - 2.0).abs() < 1e-3, "{b}");

        let s = ball_eigenvalues(2, 50).unwrap();
        for k in 1..=50 {
            let bound = torsion_eigenvalue_lower_bound(2, k, ball_torsion(2)).unwrap();
            assert!(bound <= s.lambda(k).unwrap());
        }
        let r = torsion_eigenvalue_lower_bound(2, 16, 1.0).unwrap() / torsion_eigenvalue_lower_bound(2, 4, 1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);

        let b3 = torsion_eigenvalue_lower_bound(3, 1, 4.0 * PI / 45.0).unwrap();
        assert!(b3 <= PI * PI);
    }
}
