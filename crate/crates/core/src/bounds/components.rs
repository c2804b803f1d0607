use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundReport, ConstraintKind, FloorStatus, Interval};
use crate::ball_spectrum::{ball_eigenvalues_with, DEFAULT_ZERO_BUDGET};
use crate::bessel::{nth_zero, BesselZero, Order, AIRY_BRACKET_CONST, DEFAULT_ZERO_TOL};
use crate::error::{domain, Error, Result};

/// Dimensions from here on use the asymptotic bracket instead of computed
/// zeros in [`theorem2v_table`].
pub const ASYMPTOTIC_THRESHOLD: usize = 1 << 15;

/// Relative accuracy assumed for a computed zero on top of its bisection
/// half-width, covering the evaluation error of `J_ν` near the root.
const ZERO_MODEL_ERR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableOptions {
    /// Initial Bessel zero tolerance.
    pub tol: f64,
    /// Rounds of 10× tightening when an interval straddles an integer.
    pub max_rounds: u32,
    /// Largest `m` a table may request.
    pub m_budget: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_ZERO_TOL, max_rounds: 3, m_budget: 1 << 16 }
    }
}

impl TableOptions {
    fn check_budget(&self, m_max: usize) -> Result<()> {
        if m_max > self.m_budget {
            return Err(Error::Resource(format!("m_max = {m_max} exceeds the configured budget {}", self.m_budget)));
        }
        Ok(())
    }
}

/// Which homogeneous constraint a component-count table is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaMode {
    /// `β = m`.
    LebesgueMeasure,
    /// `β = m + 2`.
    TorsionalRigidity,
}

impl BetaMode {
    pub fn beta(self, m: usize) -> f64 {
        self.kind().beta(m)
    }

    pub fn kind(self) -> ConstraintKind {
        match self {
            Self::LebesgueMeasure => ConstraintKind::LebesgueMeasure,
            Self::TorsionalRigidity => ConstraintKind::TorsionalRigidity,
        }
    }
}

fn zero_bounds(z: &BesselZero) -> (f64, f64) {
    let e = z.abs_err.max(ZERO_MODEL_ERR * z.value);
    (z.value - e, z.value + e)
}

/// Enclosure of `sqrt(λ_k(B_m)/λ₁(B_m))`.
pub(crate) fn j_ratio(m: usize, k: usize, tol: f64) -> Result<Interval> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    if k == 1 {
        return Ok(Interval::point(1.0));
    }
    let lower = nth_zero(Order::for_ball(m, 0)?, 1, tol)?;
    let (b_lo, b_hi) = zero_bounds(&lower);
    let (a, a_lo, a_hi) = if k <= m + 1 {
        // λ₂ = … = λ_{m+1} = j²_{m/2}
        let z = nth_zero(Order::for_ball(m, 1)?, 1, tol)?;
        let (lo, hi) = zero_bounds(&z);
        (z.value, lo, hi)
    } else {
        let s = ball_eigenvalues_with(m, k, tol, DEFAULT_ZERO_BUDGET)?;
        let e = s.eigenvalues[k - 1];
        let j = e.value.sqrt();
        let err = (e.abs_err / (2.0 * j)).max(ZERO_MODEL_ERR * j);
        (j, j - err, j + err)
    };
    Ok(Interval { value: a / lower.value, lo: a_lo / b_hi, hi: a_hi / b_lo })
}

/// `x ↦ x^p` on an interval, widened by the floating-point error of `powf`.
fn pow_interval(r: Interval, p: f64) -> Interval {
    let slack = 4.0 * f64::EPSILON * (p.abs() + 4.0);
    Interval {
        value: r.value.powf(p),
        lo: r.lo.powf(p) * (1.0 - slack),
        hi: r.hi.powf(p) * (1.0 + slack),
    }
}

/// Evaluate `eval(tol)` and tighten the tolerance until the interval's
/// integer part is certain or the rounds run out.
fn certify(opts: &TableOptions, mut eval: impl FnMut(f64) -> Result<Interval>) -> Result<(Interval, FloorStatus, f64)> {
    let mut tol = opts.tol;
    let mut round = 0;
    loop {
        let iv = eval(tol)?;
        if iv.certain_floor().is_some() {
            return Ok((iv, FloorStatus::Ok, tol));
        }
        if round == opts.max_rounds {
            return Ok((iv, FloorStatus::Indeterminate, tol));
        }
        round += 1;
        tol *= 0.1;
    }
}

fn floor_of(iv: &Interval, status: FloorStatus) -> i64 {
    match status {
        FloorStatus::Ok => iv.certain_floor().expect("certified"),
        // an upper bound must stay an upper bound
        FloorStatus::Indeterminate => iv.hi.floor() as i64,
    }
}

/// `Q = 2^{−(m−1)/m}((λ_k/λ₁)^{(m−1)/2} − 1)` as an interval.
fn hausdorff_quantity(m: usize, k: usize, tol: f64) -> Result<Interval> {
    let mf = m as f64;
    let r = pow_interval(j_ratio(m, k, tol)?, mf - 1.0);
    let scale = (-(mf - 1.0) / mf * LN_2).exp();
    let slack = 1.0 + 8.0 * f64::EPSILON;
    Ok(Interval {
        value: scale * (r.value - 1.0),
        lo: scale * (r.lo - 1.0) / slack,
        hi: scale * (r.hi - 1.0) * slack,
    })
}

/// Component-count bound for the boundary-measure problem,
/// `ω ≤ 1 + ⌊2^{−(m−1)/m}((λ_k(B_m)/λ₁(B_m))^{(m−1)/2} − 1)⌋`.
pub fn hausdorff_component_bound(m: usize, k: usize) -> Result<BoundReport> {
    hausdorff_component_bound_with(m, k, &TableOptions::default())
}

pub fn hausdorff_component_bound_with(m: usize, k: usize, opts: &TableOptions) -> Result<BoundReport> {
    if m < 3 || k < 3 {
        return domain(format!("the boundary-measure bound needs m >= 3 and k >= 3, got m={m}, k={k}"));
    }
    let (iv, status, tol) = certify(opts, |tol| hausdorff_quantity(m, k, tol))?;
    let omega = 1 + floor_of(&iv, status).max(0) as u64;
    Ok(BoundReport {
        dimension: m,
        k,
        beta: m as f64 - 1.0,
        kind: ConstraintKind::HausdorffBoundary.label().to_string(),
        omega_max: Some(omega),
        applicable: true,
        applicability_reason: "computed Bessel zeros".to_string(),
        bound_value: iv.value,
        bound_interval: iv,
        err_flag: status,
        tol,
    })
}

/// Certificate that `ω ≤ 4` for every `m ≥ 2¹⁵`, `k ≤ m+1`, from the
/// asymptotic zero bracket alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticOmegaCertificate {
    pub dimension: usize,
    /// `m/2 + a(m/2)^{1/3} + 2(m/2)^{−1/3}`, an upper bound for `j_{m/2}`.
    pub upper_zero: f64,
    /// `(m−2)/2 + a((m−2)/2)^{1/3}`, a lower bound for `j_{(m−2)/2}`.
    pub lower_zero: f64,
    /// `(m−1) log(upper_zero / lower_zero)`.
    pub log_power_bound: f64,
    /// `2 + 6 m^{−1/3}`.
    pub exponent_bound: f64,
    /// `35/16`, the value of `exponent_bound` at `m = 2¹⁵`.
    pub uniform_exponent: f64,
    /// `1 + ⌊2^{−(m−1)/m}(e^{log_power_bound} − 1)⌋`.
    pub omega_at_m: u64,
    /// `1 + ⌊2^{−1+2^{−15}}(e^{35/16} − 1)⌋`.
    pub uniform_omega: u64,
    /// Every link of the chain checked out.
    pub holds: bool,
}

pub fn asymptotic_omega_certificate(m: usize) -> Result<AsymptoticOmegaCertificate> {
    if m < ASYMPTOTIC_THRESHOLD {
        return domain(format!("the asymptotic certificate needs m >= {ASYMPTOTIC_THRESHOLD}, got {m}"));
    }
    let a = AIRY_BRACKET_CONST;
    let nu = m as f64 / 2.0;
    let nu0 = nu - 1.0;
    let upper_zero = nu + a * nu.cbrt() + 2.0 / nu.cbrt();
    let lower_zero = nu0 + a * nu0.cbrt();
    let mf = m as f64;
    let log_power_bound = (mf - 1.0) * (upper_zero / lower_zero).ln();
    let exponent_bound = 2.0 + 6.0 / mf.cbrt();
    let uniform_exponent: f64 = 35.0 / 16.0;
    let omega_at_m = 1 + ((-(mf - 1.0) / mf * LN_2).exp() * (log_power_bound.exp() - 1.0)).floor() as u64;
    let threshold = ASYMPTOTIC_THRESHOLD as f64;
    let uniform_omega = 1 + (((-1.0 + 1.0 / threshold) * LN_2).exp() * (uniform_exponent.exp() - 1.0)).floor() as u64;
    let holds = log_power_bound <= exponent_bound
        && exponent_bound <= uniform_exponent + 1e-15
        && omega_at_m <= uniform_omega;
    Ok(AsymptoticOmegaCertificate {
        dimension: m,
        upper_zero,
        lower_zero,
        log_power_bound,
        exponent_bound,
        uniform_exponent,
        omega_at_m,
        uniform_omega,
        holds,
    })
}

/// One row of the boundary-measure table: the bound at `k = m+1`, valid for
/// every `3 ≤ k ≤ m+1` since those eigenvalues of the ball coincide.
pub fn theorem2v_row(m: usize, opts: &TableOptions) -> Result<BoundReport> {
    if m < ASYMPTOTIC_THRESHOLD {
        let mut r = hausdorff_component_bound_with(m, m + 1, opts)?;
        r.applicability_reason = format!("computed Bessel zeros; valid for k = 3..={}", m + 1);
        return Ok(r);
    }
    let c = asymptotic_omega_certificate(m)?;
    let mf = m as f64;
    let q = (-(mf - 1.0) / mf * LN_2).exp() * (c.log_power_bound.exp() - 1.0);
    Ok(BoundReport {
        dimension: m,
        k: m + 1,
        beta: mf - 1.0,
        kind: ConstraintKind::HausdorffBoundary.label().to_string(),
        omega_max: Some(c.omega_at_m.max(1)),
        applicable: c.holds,
        applicability_reason: format!("asymptotic zero bracket; valid for k = 3..={}", m + 1),
        bound_value: q,
        bound_interval: Interval { value: q, lo: f64::NEG_INFINITY, hi: q },
        err_flag: FloorStatus::Ok,
        tol: 0.0,
    })
}

/// Boundary-measure component bounds for `m = 3..=m_max`, in order of `m`.
pub fn theorem2v_table(m_max: usize, opts: &TableOptions) -> Result<Vec<BoundReport>> {
    if m_max < 3 {
        return domain(format!("m_max must be at least 3, got {m_max}"));
    }
    opts.check_budget(m_max)?;
    (3..=m_max).into_par_iter().map(|m| theorem2v_row(m, opts)).collect()
}

fn homogeneous_label(m: usize, beta: f64) -> &'static str {
    if beta == m as f64 {
        ConstraintKind::LebesgueMeasure.label()
    } else if beta == m as f64 + 2.0 {
        ConstraintKind::TorsionalRigidity.label()
    } else {
        "homogeneous"
    }
}

/// Component-count bound for a `β`-homogeneous constraint,
/// `ω ≤ ⌊(λ_k(B_m)/λ₁(B_m))^{β/2}⌋ − 1`, informative only when
/// `k > ⌊(λ_k(B_m)/λ₁(B_m))^{β/2}⌋`.
pub fn t_constraint_component_bound(m: usize, k: usize, beta: f64) -> Result<BoundReport> {
    t_constraint_component_bound_with(m, k, beta, &TableOptions::default())
}

pub fn t_constraint_component_bound_with(m: usize, k: usize, beta: f64, opts: &TableOptions) -> Result<BoundReport> {
    if m < 2 || k < 3 {
        return domain(format!("the homogeneous bound needs m >= 2 and k >= 3, got m={m}, k={k}"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    let (iv, status, tol) = certify(opts, |tol| Ok(pow_interval(j_ratio(m, k, tol)?, beta)))?;
    let fl = floor_of(&iv, status);
    let applicable = (k as i64) > fl;
    Ok(BoundReport {
        dimension: m,
        k,
        beta,
        kind: homogeneous_label(m, beta).to_string(),
        omega_max: applicable.then(|| (fl - 1).max(1) as u64),
        applicable,
        applicability_reason: if applicable {
            format!("k = {k} > floor(ratio) = {fl}")
        } else {
            format!("k = {k} <= floor(ratio) = {fl}")
        },
        bound_value: iv.value,
        bound_interval: iv,
        err_flag: status,
        tol,
    })
}

/// One row of a homogeneous-constraint table: the smallest admissible
/// `k = max(3, ⌊R⌋ + 1)` with `R = (j_{m/2}/j_{(m−2)/2})^β`, when that is
/// at most `m + 1`.
pub fn corollary5_row(mode: BetaMode, m: usize, opts: &TableOptions) -> Result<BoundReport> {
    if m < 2 {
        return domain(format!("dimension must be at least 2, got {m}"));
    }
    let beta = mode.beta(m);
    let (iv, status, tol) = certify(opts, |tol| Ok(pow_interval(j_ratio(m, 2, tol)?, beta)))?;
    let fl = floor_of(&iv, status);
    let k_min = (fl + 1).max(3) as usize;
    let applicable = k_min <= m + 1;
    Ok(BoundReport {
        dimension: m,
        k: if applicable { k_min } else { m + 1 },
        beta,
        kind: mode.kind().label().to_string(),
        omega_max: applicable.then(|| (fl - 1).max(1) as u64),
        applicable,
        applicability_reason: if applicable {
            format!("valid for k = {k_min}..={}", m + 1)
        } else {
            format!("floor(ratio) = {fl} >= m + 1; no k <= m + 1 qualifies")
        },
        bound_value: iv.value,
        bound_interval: iv,
        err_flag: status,
        tol,
    })
}

/// Homogeneous-constraint component bounds for `m = 2..=m_max`.
pub fn corollary5_tables(mode: BetaMode, m_max: usize, opts: &TableOptions) -> Result<Vec<BoundReport>> {
    if m_max < 2 {
        return domain(format!("m_max must be at least 2, got {m_max}"));
    }
    opts.check_budget(m_max)?;
    (2..=m_max).into_par_iter().map(|m| corollary5_row(mode, m, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> TableOptions {
        TableOptions::default()
    }

    #[test]
    fn hausdorff_examples() {
        let r = hausdorff_component_bound(3, 3).unwrap();
        assert_eq!(r.omega_max, Some(1));
        // (4.49341/π)² ≈ 2.0455, 2^{−2/3}·1.0455 ≈ 0.659
        assert!((r.bound_value - 0.6586).abs() < 1e-3, "{}", r.bound_value);
        assert_eq!(hausdorff_component_bound(6, 7).unwrap().omega_max, Some(2));
        assert!(hausdorff_component_bound(2, 3).is_err());
    }

    #[test]
    fn hausdorff_bound_nondecreasing_in_k() {
        for m in [3usize, 4, 6] {
            let mut last = 0;
            for k in 3..=(m + 12) {
                let w = hausdorff_component_bound(m, k).unwrap().omega_max.unwrap();
                assert!(w >= last, "m={m} k={k}");
                last = w;
            }
        }
    }

    #[test]
    fn breakpoints_of_the_boundary_table() {
        for (m, w) in [(3, 1), (5, 1), (6, 2), (24, 2), (25, 3), (587, 3), (588, 4), (600, 4)] {
            let r = theorem2v_row(m, &opts()).unwrap();
            assert_eq!(r.omega_max, Some(w), "m={m}");
            assert_eq!(r.err_flag, FloorStatus::Ok);
        }
    }

    #[test]
    fn asymptotic_certificate_at_threshold() {
        let c = asymptotic_omega_certificate(ASYMPTOTIC_THRESHOLD).unwrap();
        assert!(c.holds);
        assert_eq!(c.uniform_omega, 4);
        assert_eq!(c.omega_at_m, 4);
        assert!((c.exponent_bound - 35.0 / 16.0).abs() < 1e-15);
        for m in [1usize << 16, 1 << 20, 1 << 30, 1_000_000_007] {
            assert!(asymptotic_omega_certificate(m).unwrap().holds, "m={m}");
        }
        assert!(asymptotic_omega_certificate(1000).is_err());
    }

    #[test]
    fn both_paths_agree_near_threshold() {
        let computed = theorem2v_row(ASYMPTOTIC_THRESHOLD - 2, &opts()).unwrap();
        let bracket = theorem2v_row(ASYMPTOTIC_THRESHOLD, &opts()).unwrap();
        assert!(computed.omega_max.unwrap() <= 4);
        assert!(bracket.omega_max.unwrap() <= 4);
        assert!(bracket.applicability_reason.starts_with("asymptotic"));
    }

    #[test]
    fn homogeneous_examples() {
        let r = t_constraint_component_bound(2, 3, 2.0).unwrap();
        assert!(r.applicable);
        assert_eq!(r.omega_max, Some(1));
        assert!((r.bound_value - 2.539).abs() < 1e-3);

        let r = t_constraint_component_bound(4, 4, 4.0).unwrap();
        assert!((r.bound_value - 3.227).abs() < 1e-3, "{}", r.bound_value);
        assert!(r.applicable);
        assert_eq!(r.omega_max, Some(2));

        let r = t_constraint_component_bound(2, 3, 4.0).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.omega_max, None);
        assert_eq!(r.csv_record()[4], "n/a");
    }

    #[test]
    fn homogeneous_breakpoints() {
        let o = opts();
        let row = |mode, m| corollary5_row(mode, m, &o).unwrap();
        for (m, k, w) in [(2, 3, 1), (3, 3, 1), (4, 4, 2), (7, 4, 2), (8, 5, 3), (19, 5, 3), (20, 6, 4), (60, 6, 4), (61, 7, 5), (548, 7, 5), (549, 8, 6)] {
            let r = row(BetaMode::LebesgueMeasure, m);
            assert!(r.applicable, "m={m}");
            assert_eq!((r.k, r.omega_max), (k, Some(w)), "beta=m, m={m}");
        }
        for m in 2..=4 {
            assert!(!row(BetaMode::TorsionalRigidity, m).applicable, "m={m}");
        }
        for (m, k, w) in [(5, 6, 4), (26, 6, 4), (27, 7, 5), (430, 7, 5), (431, 8, 6)] {
            let r = row(BetaMode::TorsionalRigidity, m);
            assert!(r.applicable, "m={m}");
            assert_eq!((r.k, r.omega_max), (k, Some(w)), "beta=m+2, m={m}");
        }
    }

    #[test]
    fn budget_and_domain() {
        let o = TableOptions { m_budget: 10, ..opts() };
        assert!(matches!(theorem2v_table(11, &o), Err(Error::Resource(_))));
        assert!(theorem2v_table(2, &o).is_err());
        assert_eq!(theorem2v_table(10, &o).unwrap().len(), 8);
    }
}
