use serde::{Deserialize, Serialize};

use super::components::ASYMPTOTIC_THRESHOLD;
use crate::bessel::{asymptotic_bracket, nth_zero, Order, DEFAULT_ZERO_TOL};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificatePath {
    ComputedZeros,
    AsymptoticBracket,
}

/// Evidence that `B_m` does not minimise `λ₂ H^{m−1}(∂Ω)^{2/(m−1)}`:
/// `j_{m/2} > 2^{1/(m−1)} j_{(m−2)/2}`, i.e. two disjoint equal balls do
/// better than one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonMinimiserCertificate {
    pub dimension: usize,
    pub path: CertificatePath,
    /// `j_{m/2}` (computed) or its lower bracket end.
    pub second_zero: f64,
    /// `2^{1/(m−1)} j_{(m−2)/2}` (computed) or with the upper bracket end.
    pub threshold: f64,
    /// `second_zero − threshold`.
    pub margin: f64,
    /// Accumulated uncertainty in `margin`; zero on the bracket path.
    pub margin_err: f64,
    pub certified: bool,
}

pub fn ball_not_minimiser_certificate(m: usize) -> Result<NonMinimiserCertificate> {
    if m < 3 {
        return domain(format!(
            "the two-ball comparison does not exclude the ball for m = {m}; the planar case needs the ellipse perturbation"
        ));
    }
    let factor = (std::f64::consts::LN_2 / (m as f64 - 1.0)).exp();
    let c = if m >= ASYMPTOTIC_THRESHOLD {
        let upper_arg = asymptotic_bracket(Order::for_ball(m, 1)?)?;
        let lower_arg = asymptotic_bracket(Order::for_ball(m, 0)?)?;
        let second_zero = upper_arg.lower;
        let threshold = factor * lower_arg.upper;
        NonMinimiserCertificate {
            dimension: m,
            path: CertificatePath::AsymptoticBracket,
            second_zero,
            threshold,
            margin: second_zero - threshold,
            margin_err: 0.0,
            certified: false,
        }
    } else {
        let a = nth_zero(Order::for_ball(m, 1)?, 1, DEFAULT_ZERO_TOL)?;
        let b = nth_zero(Order::for_ball(m, 0)?, 1, DEFAULT_ZERO_TOL)?;
        let threshold = factor * b.value;
        let margin_err = a.abs_err + factor * b.abs_err + 1e-13 * (a.value + threshold);
        NonMinimiserCertificate {
            dimension: m,
            path: CertificatePath::ComputedZeros,
            second_zero: a.value,
            threshold,
            margin: a.value - threshold,
            margin_err,
            certified: false,
        }
    };
    Ok(NonMinimiserCertificate { certified: c.margin > c.margin_err, ..c })
}

/// `true` iff the ball is certified not to be a minimiser for `k = 2`.
pub fn ball_not_minimiser_check(m: usize) -> Result<bool> {
    Ok(ball_not_minimiser_certificate(m)?.certified)
}
