//! Measures of the unit ball. Log forms stay finite for large `m`, where the
//! plain values underflow.

use std::f64::consts::PI;

/// `ln H^{m−1}(∂B_m) = ln(m π^{m/2} / Γ(m/2 + 1))`.
pub fn ln_sphere_area(m: usize) -> f64 {
    let mf = m as f64;
    mf.ln() + 0.5 * mf * PI.ln() - libm::lgamma(0.5 * mf + 1.0)
}

/// Surface measure of the unit sphere in `R^m`. Underflows to 0 for `m`
/// beyond a few hundred; use [`ln_sphere_area`] there.
pub fn sphere_area(m: usize) -> f64 {
    assert!(m >= 2, "sphere_area needs m >= 2");
    ln_sphere_area(m).exp()
}

pub fn ln_ball_volume(m: usize) -> f64 {
    ln_sphere_area(m) - (m as f64).ln()
}

/// `|B_m|`.
pub fn ball_volume(m: usize) -> f64 {
    ln_ball_volume(m).exp()
}

/// Torsional rigidity of the unit ball, `|B_m| / (m(m+2))`, from the torsion
/// function `(1 − r²)/(2m)`.
pub fn ball_torsion(m: usize) -> f64 {
    ball_volume(m) / (m * (m + 2)) as f64
}
