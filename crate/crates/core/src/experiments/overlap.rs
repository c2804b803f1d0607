use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{linear_fit, richardson, Check};
use crate::bessel::{first_zero, Order};
use crate::error::{domain, Error, Result};
use crate::fem2d::{dirichlet_eigs_with, triangulate_convex, ConvexDomain2D, EigenOptions};

/// The truncated disk `B(ε) = B(0; R) ∩ {x < R − ε}` and the union `Ω(ε)` of
/// `B(ε)` with its mirror image across the chord.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapConfig {
    pub radius: f64,
    pub eps_values: Vec<f64>,
    /// Coarse mesh size; `λ₁(B(ε))` is also solved at `target_h / 2`.
    pub target_h: f64,
    pub eigen: EigenOptions,
    /// Accepted range of the fitted exponent.
    pub exponent_range: (f64, f64),
}

impl Default for OverlapConfig {
    fn default() -> Self {
        Self {
            radius: 1.0,
            eps_values: vec![0.02, 0.05, 0.1],
            target_h: 0.02,
            eigen: EigenOptions::default(),
            exponent_range: (0.8, 1.3),
        }
    }
}

impl OverlapConfig {
    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return domain(format!("radius must be positive, got {}", self.radius));
        }
        if self.eps_values.len() < 2 {
            return domain("need at least two ε values to fit an exponent");
        }
        if self.eps_values.iter().any(|&e| !(e > 0.0 && e < 0.5 * self.radius)) {
            return domain(format!("every ε must lie in (0, R/2), got {:?}", self.eps_values));
        }
        if !(self.target_h > 0.0) {
            return domain(format!("target_h must be positive, got {}", self.target_h));
        }
        // the chord is where the union is glued; it must carry interior vertices
        if let Some(&e) = self.eps_values.iter().find(|&&e| e < 0.25 * self.target_h) {
            return Err(Error::Mesh(format!("ε = {e} is below h/4 = {}", 0.25 * self.target_h)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapPoint {
    pub eps: f64,
    pub h_coarse: f64,
    pub h_fine: f64,
    /// `λ₂(Ω(ε))` on the mirrored coarse mesh.
    pub lambda2_union: f64,
    /// `λ₁(B(ε))` on the coarse half mesh, the same triangles as one side of
    /// the union.
    pub lambda1_half_coarse: f64,
    pub lambda1_half_fine: f64,
    pub lambda1_half: f64,
    /// `λ₁(B(ε)) − λ₁(B(0; R))` from the extrapolated value.
    pub excess: f64,
    pub union_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub config: OverlapConfig,
    /// `j₀² / R²`.
    pub lambda1_ball: f64,
    pub points: Vec<OverlapPoint>,
    /// `α` in `λ₁(B(ε)) − λ₁(B(0; R)) ≈ C ε^α`.
    pub fitted_exponent: f64,
    pub fitted_constant: f64,
    pub checks: Vec<Check>,
}

impl OverlapReport {
    pub fn passed(&self) -> bool {
        super::all_passed(&self.checks)
    }

    pub fn lambda2_union(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda2_union).collect()
    }

    pub fn lambda1_halfdisk(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda1_half).collect()
    }
}

fn solve_point(eps: f64, config: &OverlapConfig) -> Result<OverlapPoint> {
    let r = config.radius;
    let half = ConvexDomain2D::truncated_disk(r, eps)?;
    let coarse = triangulate_convex(&half, config.target_h)?;
    let fine = triangulate_convex(&half, 0.5 * config.target_h)?;
    let union = coarse.mirrored_union(r - eps)?;
    let l_coarse = dirichlet_eigs_with(&coarse, 1, &config.eigen)?.eigenvalues[0];
    let l_fine = dirichlet_eigs_with(&fine, 1, &config.eigen)?.eigenvalues[0];
    let l_union = dirichlet_eigs_with(&union, 2, &config.eigen)?.eigenvalues[1];
    let lambda1_half = richardson(coarse.h, l_coarse, fine.h, l_fine);
    let j0 = first_zero(Order::new(0.0)?)?.value;
    Ok(OverlapPoint {
        eps,
        h_coarse: coarse.h,
        h_fine: fine.h,
        lambda2_union: l_union,
        lambda1_half_coarse: l_coarse,
        lambda1_half_fine: l_fine,
        lambda1_half,
        excess: lambda1_half - j0 * j0 / (r * r),
        union_vertices: union.vertex_count(),
    })
}

/// Dirichlet bracketing for two overlapping disks in the plane:
/// `λ₂(Ω(ε)) ≤ λ₁(B(ε))`, because the odd eigenfunctions of `Ω(ε)` vanish
/// on the chord. Also fits the rate at which `λ₁(B(ε))` approaches
/// `λ₁(B(0; R))`.
///
/// The chain is checked on one mesh (the union is the mirrored half mesh).
/// The rate uses `λ₁(B(ε))` extrapolated from `h` and `h/2`.
pub fn lemma6_experiment(config: &OverlapConfig) -> Result<OverlapReport> {
    config.validate()?;
    let points: Vec<OverlapPoint> =
        config.eps_values.par_iter().map(|&e| solve_point(e, config)).collect::<Result<_>>()?;
    let j0 = first_zero(Order::new(0.0)?)?.value;
    let lambda1_ball = j0 * j0 / (config.radius * config.radius);

    let slack = 2.0 * config.eigen.tol;
    let mut checks: Vec<Check> = points
        .iter()
        .map(|p| {
            let ok = p.lambda2_union <= p.lambda1_half_coarse * (1.0 + slack);
            Check::new(
                format!("chain_eps_{}", p.eps),
                ok,
                format!("λ₂(Ω) = {:.10} ≤ λ₁(B(ε)) = {:.10}", p.lambda2_union, p.lambda1_half_coarse),
            )
        })
        .collect();
    let monotone = points.windows(2).all(|w| w[0].lambda1_half < w[1].lambda1_half);
    checks.push(Check::new("monotone_in_eps", monotone, "λ₁(B(ε)) increases with ε"));

    let (fitted_exponent, fitted_constant) = if points.iter().all(|p| p.excess > 0.0) {
        let lx: Vec<f64> = points.iter().map(|p| p.eps.ln()).collect();
        let ly: Vec<f64> = points.iter().map(|p| p.excess.ln()).collect();
        let (a, b) = linear_fit(&lx, &ly);
        (b, a.exp())
    } else {
        (f64::NAN, f64::NAN)
    };
    let (lo, hi) = config.exponent_range;
    checks.push(Check::new(
        "exponent",
        (lo..=hi).contains(&fitted_exponent),
        format!("α = {fitted_exponent:.4}, accepted [{lo}, {hi}]"),
    ));
    Ok(OverlapReport { config: config.clone(), lambda1_ball, points, fitted_exponent, fitted_constant, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracketing_holds_on_coarse_meshes() {
        let cfg = OverlapConfig { eps_values: vec![0.1, 0.2], target_h: 0.08, ..OverlapConfig::default() };
        let r = lemma6_experiment(&cfg).unwrap();
        for p in &r.points {
            assert!(p.lambda2_union <= p.lambda1_half_coarse * (1.0 + 1e-7));
            assert!(p.excess > 0.0);
        }
        assert!(r.points[0].lambda1_half < r.points[1].lambda1_half);
    }

    #[test]
    fn eps_below_mesh_scale_is_a_mesh_error() {
        let cfg = OverlapConfig { eps_values: vec![0.001, 0.1], target_h: 0.05, ..OverlapConfig::default() };
        assert!(matches!(lemma6_experiment(&cfg), Err(Error::Mesh(_))));
    }
}
