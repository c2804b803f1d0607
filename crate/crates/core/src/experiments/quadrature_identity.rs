use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Check;
use crate::bessel::{bessel_j, first_zero, Order};
use crate::error::{domain, Error, Result};
use crate::quadrature::gauss_legendre;

const START_ORDER: usize = 8;
const MAX_ORDER: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub tol: f64,
    /// `∫(∂φ₀/∂x₂)² / ∫|∇φ₀|²` over the upper half-disk.
    pub ratio: f64,
    pub ratio_change: f64,
    pub radial_order: usize,
    pub angular_order: usize,
    /// `∫₀¹ J₁′(j₁r) J₁(j₁r) dr`.
    pub orthogonality: f64,
    /// `∫₀^π cos⁴`, `∫₀^π sin⁴`, `∫₀^π cos² sin²`.
    pub angular: [f64; 3],
    pub checks: Vec<Check>,
}

impl QuadratureReport {
    pub fn passed(&self) -> bool {
        super::all_passed(&self.checks)
    }
}

/// `(J₁(x), J₁′(x))` with `J₁′ = J₀ − J₁/x`.
fn j1_and_derivative(x: f64) -> Result<(f64, f64)> {
    let j0 = bessel_j(Order::new(0.0)?, x)?;
    let j1 = bessel_j(Order::new(1.0)?, x)?;
    Ok((j1, j0 - j1 / x))
}

/// `(∫(∂φ₀/∂x₂)², ∫|∇φ₀|²)` over the upper half-disk for
/// `φ₀ = J₁(j₁r) sin θ`, by `n_r`-point Gauss–Legendre in `r` and the
/// `n_theta`-point trapezoid rule in `θ`.
pub fn half_disk_integrals(n_r: usize, n_theta: usize) -> Result<(f64, f64)> {
    if n_r == 0 || n_theta == 0 {
        return domain("quadrature orders must be positive");
    }
    let j1 = first_zero(Order::new(1.0)?)?.value;
    let (x, w) = gauss_legendre(n_r);
    let dtheta = PI / n_theta as f64;
    let (mut dx2, mut grad) = (0.0, 0.0);
    for (&xi, &wi) in x.iter().zip(&w) {
        let r = 0.5 * (xi + 1.0);
        let (b1, db1) = j1_and_derivative(j1 * r)?;
        let a = j1 * db1;
        let b = b1 / r;
        // trapezoid over one period of a π-periodic integrand
        let (mut s_dx2, mut s_grad) = (0.0, 0.0);
        for i in 0..n_theta {
            let t = i as f64 * dtheta;
            let (s, c) = t.sin_cos();
            let d2 = a * s * s + b * c * c;
            s_dx2 += d2 * d2;
            s_grad += a * a * s * s + b * b * c * c;
        }
        let wr = 0.5 * wi * r;
        dx2 += wr * s_dx2 * dtheta;
        grad += wr * s_grad * dtheta;
    }
    Ok((dx2, grad))
}

/// `∫₀¹ J₁′(j₁r) J₁(j₁r) dr`, which vanishes because `J₁(0) = J₁(j₁) = 0`.
pub fn orthogonality_integral(n: usize) -> Result<f64> {
    let j1 = first_zero(Order::new(1.0)?)?.value;
    let (x, w) = gauss_legendre(n);
    let mut s = 0.0;
    for (&xi, &wi) in x.iter().zip(&w) {
        let (b, db) = j1_and_derivative(j1 * 0.5 * (xi + 1.0))?;
        s += wi * b * db;
    }
    Ok(0.5 * s)
}

/// `(∫₀^π cos⁴, ∫₀^π sin⁴, ∫₀^π cos² sin²)` by the `n`-point trapezoid rule.
pub fn angular_moments(n: usize) -> [f64; 3] {
    let d = PI / n as f64;
    let mut m = [0.0; 3];
    for i in 0..n {
        let (s, c) = (i as f64 * d).sin_cos();
        m[0] += c.powi(4);
        m[1] += s.powi(4);
        m[2] += c * c * s * s;
    }
    m.map(|v| v * d)
}

/// The ratio `∫(∂φ₀/∂x₂)² / ∫|∇φ₀|²`, which equals `3/4`. Both quadrature
/// orders are doubled until successive ratios agree to `tol / 10`.
pub fn quadrature_ratio_check(tol: f64) -> Result<f64> {
    quadrature_report(tol).map(|r| r.ratio)
}

pub fn quadrature_report(tol: f64) -> Result<QuadratureReport> {
    if !(tol >= 1e-10) {
        return domain(format!("tolerance must be at least 1e-10, got {tol}"));
    }
    let ratio_at = |n: usize| half_disk_integrals(n, n).map(|(a, b)| a / b);
    let mut n = START_ORDER;
    let mut prev = ratio_at(n)?;
    loop {
        if 2 * n > MAX_ORDER {
            return Err(Error::Precision(format!("half-disk quadrature did not settle to {tol:e} by order {n}")));
        }
        n *= 2;
        let cur = ratio_at(n)?;
        let change = (cur - prev).abs();
        if change <= 0.1 * tol {
            let orthogonality = orthogonality_integral(n)?;
            let angular = angular_moments(n);
            let checks = vec![
                Check::new("ratio", (cur - 0.75).abs() <= tol, format!("{cur:.15} vs 0.75 (tol {tol:e})")),
                Check::new("orthogonality", orthogonality.abs() <= tol, format!("{orthogonality:e}")),
                Check::new(
                    "angular_moments",
                    (angular[0] - 3.0 * PI / 8.0).abs() < 1e-12
                        && (angular[1] - 3.0 * PI / 8.0).abs() < 1e-12
                        && (angular[2] - PI / 8.0).abs() < 1e-12,
                    format!("{:?}", angular),
                ),
            ];
            return Ok(QuadratureReport {
                tol,
                ratio: cur,
                ratio_change: change,
                radial_order: n,
                angular_order: n,
                orthogonality,
                angular,
                checks,
            });
        }
        prev = cur;
    }
}
