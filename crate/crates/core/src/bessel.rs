//! Bessel functions of the first kind and their positive zeros.
//!
//! `J_ν(x)` is evaluated for real `ν ≥ 0` and `0 ≤ x ≤ 10⁶`. Small arguments
//! (`x²/4 ≤ (ν+1)/2`) use the ascending series, where every term is smaller
//! than the previous one and the sum cannot cancel. Everything else uses
//! Miller's backward recurrence started well above `max(ν, x)` and
//! normalized at the fractional order `μ = ν − ⌊ν⌋` through the Neumann sum
//!
//! ```text
//! (x/2)^μ = Σ_{k≥0} (μ+2k) Γ(μ+k) / k! · J_{μ+2k}(x)
//! ```
//!
//! (for `μ = 0` this is `1 = J₀ + 2 Σ J_{2k}`). The normalization is a
//! positive factor, so the sign of the recurrence value alone decides which
//! side of a zero we are on. Zero finding relies on that.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1.0e6;

/// Default absolute tolerance for [`nth_zero`].
pub const DEFAULT_ZERO_TOL: f64 = 1.0e-10;

/// The constant `a` in `j_ν = ν + a ν^{1/3} + a_ν ν^{-1/3}`, equal to
/// `−2^{-1/3}` times the first zero of the Airy function `Ai` (1.85575708…),
/// kept to eight significant digits.
pub const AIRY_BRACKET_CONST: f64 = 1.855_757_1;
/// Lower limit of the coefficient `a_ν` for `1 ≤ ν < ∞`.
pub const AIRY_COEFF_LOW: f64 = 0.500;
/// Upper limit of the coefficient `a_ν` for `1 ≤ ν < ∞`.
pub const AIRY_COEFF_HIGH: f64 = 1.537;

const RESCALE: f64 = 1.0e250;
const MAX_SCAN_STEPS: usize = 2_000_000;
const MAX_BISECTIONS: usize = 400;

/// Order `ν ≥ 0` of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return domain(format!("Bessel order must be finite and non-negative, got {nu}"));
        }
        Ok(Order(nu))
    }

    /// Order `(m−2)/2 + l` attached to degree-`l` harmonics on the unit ball of `R^m`.
    pub fn for_ball(m: usize, degree: usize) -> Result<Self> {
        if m < 2 {
            return domain(format!("dimension must be at least 2, got {m}"));
        }
        Order::new((m as f64 - 2.0) / 2.0 + degree as f64)
    }

    pub fn nu(self) -> f64 {
        self.0
    }
}

/// A positive zero `j_{ν,n}` of `J_ν`, with the half-width of the bracket
/// that encloses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub order: Order,
    pub index: usize,
    pub value: f64,
    pub abs_err: f64,
}

impl BesselZero {
    pub fn lower(&self) -> f64 {
        self.value - self.abs_err
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_err
    }
}

/// Enclosure `ν + a ν^{1/3} + a_ν ν^{-1/3}` of the first zero with
/// `0.500 < a_ν < 1.537`, valid for `ν ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticBracket {
    pub nu: Order,
    pub lower: f64,
    pub upper: f64,
    pub a_const: f64,
    pub a_nu_low: f64,
    pub a_nu_high: f64,
}

impl AsymptoticBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `J_ν(x)` for `ν ≥ 0`, `0 ≤ x ≤ 10⁶`.
pub fn bessel_j(order: Order, x: f64) -> Result<f64> {
    let nu = order.nu();
    if !x.is_finite() || x < 0.0 {
        return domain(format!("Bessel argument must be finite and non-negative, got {x}"));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Precision(format!(
            "argument {x} exceeds {MAX_ARGUMENT}; recurrence accuracy is not guaranteed"
        )));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if 0.25 * x * x <= 0.5 * (nu + 1.0) {
        return Ok(ascending_series(nu, x));
    }
    Ok(miller(nu, x))
}

/// Ascending power series `Σ (−x²/4)^k / (k! Γ(ν+k+1)) · (x/2)^ν`.
fn ascending_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    let log_prefactor = nu * (0.5 * x).ln() - libm::lgamma(nu + 1.0);
    sum * log_prefactor.exp()
}

/// Miller backward recurrence normalized by the Neumann sum at order `μ`.
fn miller(nu: f64, x: f64) -> f64 {
    let n_int = nu.floor() as usize;
    let mu = nu - n_int as f64;
    let reach = nu.max(x);
    let top = (reach + 30.0 + 20.0 * x.max(1.0).cbrt()).ceil() as usize + 2;

    // Weight of J_{μ+2k} in the Neumann sum, started at the highest even
    // index reached and stepped down exactly.
    let top_k = top / 2;
    let mut weight = {
        let k = top_k as f64;
        ((mu + 2.0 * k).ln() + libm::lgamma(mu + k) - libm::lgamma(k + 1.0)).exp()
    };
    let mut k_of_weight = top_k;

    let mut y_next = 0.0; // y_{n+1}
    let mut y = 1.0e-30; // y_n, n = top
    let mut sum = 0.0;
    let mut captured: Option<f64> = None;
    let mut rescales_after_capture = 0i32;

    let mut n = top;
    loop {
        if n == n_int {
            captured = Some(y);
        }
        if n % 2 == 0 {
            let k = n / 2;
            while k_of_weight > k {
                let kk = k_of_weight as f64;
                weight *= if k_of_weight == 1 {
                    1.0 / (mu + 2.0)
                } else {
                    kk * (mu + 2.0 * kk - 2.0) / ((mu + 2.0 * kk) * (mu + kk - 1.0))
                };
                k_of_weight -= 1;
            }
            sum += weight * y;
        }
        if n == 0 {
            break;
        }
        let order = mu + n as f64;
        let y_prev = 2.0 * order / x * y - y_next;
        y_next = y;
        y = y_prev;
        n -= 1;
        if y.abs() > RESCALE {
            y /= RESCALE;
            y_next /= RESCALE;
            sum /= RESCALE;
            if captured.is_some() {
                rescales_after_capture += 1;
            }
        }
    }
    let y_nu = captured.expect("recurrence passes through the requested order");
    if y_nu == 0.0 {
        return 0.0;
    }
    let log_mag = y_nu.abs().ln() - f64::from(rescales_after_capture) * RESCALE.ln() - sum.ln()
        + mu * (0.5 * x).ln();
    y_nu.signum() * log_mag.exp()
}

/// The `n`-th positive zero of `J_ν` to absolute accuracy `tol`.
///
/// Zeros are isolated by scanning from `ν` (no zero lies in `(0, ν]`) with a
/// step of `π/2`, shorter than the gap between consecutive zeros, and then
/// refined by bisection.
pub fn nth_zero(order: Order, n: usize, tol: f64) -> Result<BesselZero> {
    if n == 0 {
        return domain("zero index starts at 1");
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let nu = order.nu();
    let step = 0.5 * PI;
    let mut lo = nu;
    let mut f_lo = bessel_j(order, lo)?;
    let mut found = 0usize;
    let mut bracket = None;
    for _ in 0..MAX_SCAN_STEPS {
        let hi = lo + step;
        let f_hi = bessel_j(order, hi)?;
        if f_hi == 0.0 {
            found += 1;
            if found == n {
                return Ok(BesselZero { order, index: n, value: hi, abs_err: 0.0 });
            }
            // Step past the exact zero so the next sign change is clean.
            lo = hi + 1e-9 * hi.max(1.0);
            f_lo = bessel_j(order, lo)?;
            continue;
        }
        if f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == n {
                bracket = Some((lo, hi, f_lo));
                break;
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut a, mut b, f_a) = bracket.ok_or_else(|| {
        Error::Convergence(format!("zero {n} of J_{nu} not isolated within the scan budget"))
    })?;
    let sign_a = f_a.signum();
    for _ in 0..MAX_BISECTIONS {
        if 0.5 * (b - a) <= tol {
            return Ok(BesselZero { order, index: n, value: 0.5 * (a + b), abs_err: 0.5 * (b - a) });
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let f_mid = bessel_j(order, mid)?;
        if f_mid == 0.0 {
            return Ok(BesselZero { order, index: n, value: mid, abs_err: 0.0 });
        }
        if f_mid.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::Convergence(format!(
        "bisection for zero {n} of J_{nu} stalled at width {:e} above tolerance {tol:e}",
        b - a
    )))
}

/// First positive zero with the default tolerance.
pub fn first_zero(order: Order) -> Result<BesselZero> {
    nth_zero(order, 1, DEFAULT_ZERO_TOL)
}

/// The enclosure `ν + aν^{1/3} + {0.500, 1.537}·ν^{-1/3}` of `j_ν`, `ν ≥ 1`.
pub fn asymptotic_bracket(order: Order) -> Result<AsymptoticBracket> {
    let nu = order.nu();
    if nu < 1.0 {
        return domain(format!("asymptotic bracket holds only for ν ≥ 1, got {nu}"));
    }
    let c = nu.cbrt();
    let base = nu + AIRY_BRACKET_CONST * c;
    Ok(AsymptoticBracket {
        nu: order,
        lower: base + AIRY_COEFF_LOW / c,
        upper: base + AIRY_COEFF_HIGH / c,
        a_const: AIRY_BRACKET_CONST,
        a_nu_low: AIRY_COEFF_LOW,
        a_nu_high: AIRY_COEFF_HIGH,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ord(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    /// Ascending series summed term by term without the small-argument
    /// shortcut; an oracle for moderate `x`.
    fn series_oracle(nu: f64, x: f64) -> f64 {
        let mut total = 0.0;
        let mut k = 0u32;
        loop {
            let log_mag = (2.0 * f64::from(k) + nu) * (0.5 * x).ln()
                - libm::lgamma(f64::from(k) + 1.0)
                - libm::lgamma(nu + f64::from(k) + 1.0);
            let t = if k % 2 == 0 { log_mag.exp() } else { -log_mag.exp() };
            total += t;
            if k > 10 && t.abs() < 1e-20 {
                return total;
            }
            k += 1;
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(ord(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(ord(2.5), 0.0).unwrap(), 0.0);
        assert!(bessel_j(ord(0.5), PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn half_integer_closed_form() {
        for &x in &[0.3, 1.0, 2.7, 9.0, 40.0, 333.3] {
            let expect = (2.0 / (PI * x)).sqrt() * x.sin();
            assert_relative_eq!(bessel_j(ord(0.5), x).unwrap(), expect, epsilon = 1e-14, max_relative = 1e-12);
            let expect32 = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert_relative_eq!(bessel_j(ord(1.5), x).unwrap(), expect32, epsilon = 1e-14, max_relative = 1e-12);
        }
    }

    #[test]
    fn j1_at_one_matches_series() {
        // series summed to machine convergence: 0.44005058574493355
        let v = bessel_j(ord(1.0), 1.0).unwrap();
        assert_relative_eq!(v, series_oracle(1.0, 1.0), max_relative = 1e-14);
        assert_relative_eq!(v, 0.440_050_585_744_933_5, max_relative = 1e-14);
    }

    #[test]
    fn recurrence_path_agrees_with_series() {
        for &nu in &[0.0, 0.25, 1.0, 3.5, 7.0] {
            for &x in &[2.5, 4.0, 6.0, 8.0] {
                let got = miller(nu, x);
                let want = series_oracle(nu, x);
                // the alternating series cancels terms as large as e^{x}/x
                let slack = 1e-14 * x.exp() / x;
                assert!((got - want).abs() <= slack.max(1e-14), "nu={nu} x={x} {got} {want}");
            }
        }
    }

    #[test]
    fn reference_values() {
        // Reference values from an independent arbitrary-precision evaluation.
        let cases = [
            (0.0, 10.0, -0.245_935_764_451_348_3),
            (0.0, 100.0, 0.019_985_850_304_223_122),
            (1.0, 50.0, -0.097_511_828_125_175_14),
            (10.0, 20.0, 0.186_482_558_023_945_2),
            (100.0, 120.0, 0.075_737_179_130_010_7),
            (2.5, 7.5, -0.299_104_052_457_313_05),
        ];
        for (nu, x, want) in cases {
            let got = bessel_j(ord(nu), x).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(Order::new(-1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(ord(1.0), -0.1), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(ord(1.0), 2e6), Err(Error::Precision(_))));
        assert!(matches!(nth_zero(ord(1.0), 0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn known_zeros() {
        let z = nth_zero(ord(0.5), 1, 1e-12).unwrap();
        assert!((z.value - PI).abs() < 1e-11);
        // bisection on series-evaluated J0 over [2, 3]
        let bis = {
            let (mut a, mut b) = (2.0f64, 3.0f64);
            while b - a > 1e-14 {
                let m = 0.5 * (a + b);
                if series_oracle(0.0, m) > 0.0 { a = m } else { b = m }
            }
            0.5 * (a + b)
        };
        let z0 = nth_zero(ord(0.0), 1, 1e-12).unwrap();
        assert!((z0.value - bis).abs() < 1e-11);
        assert!((z0.value - 2.404_825_557_695_773).abs() < 1e-11);
        // root of tan x = x in (π, 3π/2)
        let tan_root = {
            let (mut a, mut b) = (PI + 0.1, 1.5 * PI - 1e-9);
            while b - a > 1e-14 {
                let m = 0.5 * (a + b);
                if m.tan() - m < 0.0 { a = m } else { b = m }
            }
            0.5 * (a + b)
        };
        let z32 = nth_zero(ord(1.5), 1, 1e-12).unwrap();
        assert!((z32.value - tan_root).abs() < 1e-11);
        assert!((z32.value - 4.493_409_457_909_064).abs() < 1e-11);
    }

    #[test]
    fn higher_zeros_of_j0() {
        let want = [2.404_825_557_695_773, 5.520_078_110_286_311, 8.653_727_912_911_012, 11.791_534_439_014_28];
        for (i, w) in want.iter().enumerate() {
            let z = nth_zero(ord(0.0), i + 1, 1e-12).unwrap();
            assert!((z.value - w).abs() < 1e-10, "zero {} {}", i + 1, z.value);
        }
    }

    #[test]
    fn three_term_recurrence_residual() {
        for nu in 1..=20 {
            let nu = f64::from(nu);
            let mut x = 0.25;
            while x <= 50.0 {
                let jm = bessel_j(ord(nu - 1.0), x).unwrap();
                let j0 = bessel_j(ord(nu), x).unwrap();
                let jp = bessel_j(ord(nu + 1.0), x).unwrap();
                let res = (jm + jp - 2.0 * nu / x * j0).abs();
                assert!(res <= 1e-10 * j0.abs().max(1.0), "nu={nu} x={x} res={res}");
                x += 0.25;
            }
        }
    }

    #[test]
    fn interlacing() {
        for step in 0..=20 {
            let nu = 0.5 * f64::from(step);
            for n in 1..=5 {
                let a = nth_zero(ord(nu), n, 1e-10).unwrap().value;
                let b = nth_zero(ord(nu + 1.0), n, 1e-10).unwrap().value;
                let c = nth_zero(ord(nu), n + 1, 1e-10).unwrap().value;
                assert!(a < b && b < c, "nu={nu} n={n}: {a} {b} {c}");
            }
        }
    }

    #[test]
    fn bracket_containment() {
        let orders: Vec<f64> = (1..=64).map(f64::from).chain([1024.0, 4096.0]).collect();
        for nu in orders {
            let z = first_zero(ord(nu)).unwrap();
            let br = asymptotic_bracket(ord(nu)).unwrap();
            assert!(br.lower < br.upper);
            assert!(br.contains(z.value), "nu={nu}: {} not in [{}, {}]", z.value, br.lower, br.upper);
        }
    }

    #[test]
    fn bracket_at_one_and_domain() {
        let br = asymptotic_bracket(ord(1.0)).unwrap();
        assert_relative_eq!(br.lower, 3.355_757_1, max_relative = 1e-15);
        assert_relative_eq!(br.upper, 4.392_757_1, max_relative = 1e-15);
        assert!(matches!(asymptotic_bracket(ord(0.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn sign_change_at_returned_zeros() {
        let tol = 1e-9;
        for &nu in &[0.0, 0.5, 1.0, 2.5, 13.0, 150.0] {
            for n in 1..=3 {
                let z = nth_zero(ord(nu), n, tol * 0.1).unwrap();
                assert!(z.abs_err < tol);
                assert!(z.value > nu);
                let a = bessel_j(ord(nu), z.value - tol).unwrap();
                let b = bessel_j(ord(nu), z.value + tol).unwrap();
                assert!(a * b < 0.0, "nu={nu} n={n}");
            }
        }
    }
}
