use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eigenvalues_on, linear_fit, richardson, Check};
use crate::bessel::{first_zero, Order};
use crate::error::{domain, Result};
use crate::fem2d::{shape_metrics, ConvexDomain2D, EigenOptions};
use crate::quadrature::integrate_adaptive;

/// Ellipses with semi-axes `(1, 1 + t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipseConfig {
    pub t_values: Vec<f64>,
    /// Coarse mesh size; each shape is also solved at `target_h / 2`.
    pub target_h: f64,
    pub eigen: EigenOptions,
    /// Accepted distance of the fitted slope from `−1/2`.
    pub slope_tolerance: f64,
}

impl Default for EllipseConfig {
    fn default() -> Self {
        Self {
            t_values: vec![0.02, 0.04, 0.06, 0.08],
            target_h: 0.02,
            eigen: EigenOptions::default(),
            slope_tolerance: 0.1,
        }
    }
}

impl EllipseConfig {
    fn validate(&self) -> Result<()> {
        if self.t_values.is_empty() {
            return domain("t_values must not be empty");
        }
        if self.t_values.iter().any(|&t| !(t > 0.0 && t <= 0.5)) {
            return domain(format!("every t must lie in (0, 0.5], got {:?}", self.t_values));
        }
        if self.t_values.windows(2).any(|w| w[0] >= w[1]) {
            return domain("t_values must be strictly increasing");
        }
        if !(self.target_h > 0.0) {
            return domain(format!("target_h must be positive, got {}", self.target_h));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsePoint {
    pub t: f64,
    pub perimeter: f64,
    pub h_coarse: f64,
    pub h_fine: f64,
    pub lambda2_coarse: f64,
    pub lambda2_fine: f64,
    pub lambda2: f64,
    /// `λ₃` on the fine mesh, to show the gap above `λ₂`.
    pub lambda3_fine: f64,
    /// `H¹(∂Ω_t)² λ₂(Ω_t)` from the extrapolated `λ₂`.
    pub f: f64,
    pub f_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipseReport {
    pub config: EllipseConfig,
    /// The `t = 0` disk, computed the same way as the ellipses.
    pub disk: EllipsePoint,
    /// `(2π)² j₁²`.
    pub f0_exact: f64,
    pub points: Vec<EllipsePoint>,
    /// Intercept of the line fitted to `s(t) = (f(t) − f(0)) / (t f(0))`.
    pub fitted_slope: f64,
    /// Slope of that line, the first correction in `t`.
    pub slope_drift: f64,
    pub checks: Vec<Check>,
}

impl EllipseReport {
    pub fn passed(&self) -> bool {
        super::all_passed(&self.checks)
    }

    pub fn f_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.f).collect()
    }
}

/// `4∫₀¹ (1−x²)^{−1/2} (1 + (2t + t²) x²)^{1/2} dx`, the perimeter of the
/// ellipse with semi-axes `(1, 1+t)`, evaluated after `x = sin u`.
pub fn ellipse_perimeter_integral(t: f64) -> Result<f64> {
    let c = 2.0 * t + t * t;
    Ok(4.0 * integrate_adaptive(|u| (1.0 + c * u.sin().powi(2)).sqrt(), 0.0, 0.5 * PI, 1e-13)?)
}

fn solve_point(t: f64, config: &EllipseConfig) -> Result<EllipsePoint> {
    let domain = ConvexDomain2D::ellipse(1.0, 1.0 + t)?;
    let (_, perimeter) = shape_metrics(&domain)?;
    let (coarse, lc) = eigenvalues_on(&domain, config.target_h, 2, &config.eigen)?;
    let (fine, lf) = eigenvalues_on(&domain, 0.5 * config.target_h, 3, &config.eigen)?;
    let lambda2 = richardson(coarse.h, lc[1], fine.h, lf[1]);
    Ok(EllipsePoint {
        t,
        perimeter,
        h_coarse: coarse.h,
        h_fine: fine.h,
        lambda2_coarse: lc[1],
        lambda2_fine: lf[1],
        lambda2,
        lambda3_fine: lf[2],
        f: perimeter * perimeter * lambda2,
        f_ratio: f64::NAN,
    })
}

/// `f(t) = H¹(∂Ω_t)² λ₂(Ω_t)` on the ellipses `Ω_t` and the normalised slope
/// at `t → 0`, which is `−1/2` to first order: the perimeter factor is
/// `(1 + t/2)` and `λ₂` drops by `(1 − 3t/2)`.
///
/// Each `λ₂` is Richardson-extrapolated from meshes of size `h` and `h/2`.
/// The slope is the intercept of the least-squares line through
/// `s(t) = (f(t) − f(0)) / (t f(0))`.
pub fn ellipse_experiment(config: &EllipseConfig) -> Result<EllipseReport> {
    config.validate()?;
    let mut ts = vec![0.0];
    ts.extend(&config.t_values);
    let solved: Vec<EllipsePoint> = ts.par_iter().map(|&t| solve_point(t, config)).collect::<Result<_>>()?;
    let mut solved = solved.into_iter();
    let mut disk = solved.next().expect("t = 0 is always solved");
    let f0 = disk.f;
    disk.f_ratio = 1.0;
    let points: Vec<EllipsePoint> = solved.map(|p| EllipsePoint { f_ratio: p.f / f0, ..p }).collect();

    let s: Vec<f64> = points.iter().map(|p| (p.f_ratio - 1.0) / p.t).collect();
    let (fitted_slope, slope_drift) = if points.len() >= 2 {
        linear_fit(&config.t_values, &s)
    } else {
        (s[0], 0.0)
    };
    let j1 = first_zero(Order::new(1.0)?)?.value;
    let f0_exact = TAU * TAU * j1 * j1;

    let worst_ratio = points.iter().map(|p| p.f_ratio).fold(f64::NEG_INFINITY, f64::max);
    let mut checks = vec![
        Check::new("ellipse_beats_disk", worst_ratio < 1.0, format!("max f(t)/f(0) = {worst_ratio:.8}")),
        Check::new(
            "slope",
            (fitted_slope + 0.5).abs() <= config.slope_tolerance,
            format!("{fitted_slope:.5} vs -0.5 ± {}", config.slope_tolerance),
        ),
    ];
    let disk_err = (f0 / f0_exact - 1.0).abs();
    checks.push(Check::new("disk_value", disk_err < 1e-3, format!("f(0) = {f0:.6}, exact {f0_exact:.6}")));
    let perim_err = points
        .iter()
        .map(|p| ellipse_perimeter_integral(p.t).map(|q| (p.perimeter / q - 1.0).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::new("perimeter_formula", perim_err <= 1e-6, format!("max relative gap {perim_err:e}")));
    Ok(EllipseReport { config: config.clone(), disk, f0_exact, points, fitted_slope, slope_drift, checks })
}
