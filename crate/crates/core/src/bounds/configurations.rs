use serde::{Deserialize, Serialize};

use super::components::{hausdorff_component_bound_with, j_ratio};
use super::{ConstraintFunctional, ConstraintKind, FloorStatus, Interval, TableOptions};
use crate::error::{domain, Error, Result};

/// A possible component structure of a minimiser of `λ_k`: `k1` components
/// that support exactly one eigenvalue (balls) and `k2` components that
/// support several. A single `k2` component with `k1 = 0` is the connected
/// case; any eigenvalues not accounted for are absorbed by the `k2` part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub k1: usize,
    pub k2: usize,
    pub omega: usize,
}

impl Configuration {
    pub fn new(k1: usize, k2: usize) -> Self {
        Self { k1, k2, omega: k1 + k2 }
    }

    pub fn is_connected(&self) -> bool {
        self.omega == 1
    }

    /// Plain-language reading for eigenvalue index `k`.
    pub fn describe(&self, k: usize) -> String {
        match (self.k1, self.k2) {
            (_, 0) => format!("{} disjoint equal balls", self.k1),
            (0, 1) => "connected".to_string(),
            (k1, 1) => {
                let balls = if k1 == 1 { "one ball".to_string() } else { format!("{k1} balls") };
                format!("{balls} + one component supporting {} eigenvalues", k - k1)
            }
            (0, k2) => format!("{k2} multi-eigenvalue components"),
            (k1, k2) => format!("{k1} balls + {k2} multi-eigenvalue components"),
        }
    }
}

fn certified_floor(m: usize, k: usize, beta: f64, opts: &TableOptions) -> Result<i64> {
    let mut tol = opts.tol;
    for _ in 0..=opts.max_rounds {
        let r = j_ratio(m, k, tol)?;
        let iv = Interval {
            value: r.value.powf(beta),
            lo: r.lo.powf(beta) * (1.0 - 4.0 * f64::EPSILON * (beta + 4.0)),
            hi: r.hi.powf(beta) * (1.0 + 4.0 * f64::EPSILON * (beta + 4.0)),
        };
        if let Some(f) = iv.certain_floor() {
            return Ok(f);
        }
        tol *= 0.1;
    }
    Err(Error::Precision(format!(
        "(λ_k/λ_1)^(β/2) sits on an integer for m={m}, k={k}, β={beta}; status {}",
        FloorStatus::Indeterminate
    )))
}

fn admissible(k: usize, k1: usize, k2: usize, per_component: usize) -> bool {
    k1 + k2 >= 1 && (k2 > 0 || k1 == k) && k >= k1 + per_component * k2
}

/// Every `(k1, k2)` with `k1 + 2k2 ≤ (λ_k(B_m)/λ₁(B_m))^{β/2}` compatible
/// with `k`, sorted by `ω`.
///
/// If `k2 = 0` the minimiser is `k` equal balls, so `k1 = k`. Otherwise each
/// multi-eigenvalue component supports at least two eigenvalues, or at least
/// three when `refined` (the `k = 2` minimiser is two balls, so no component
/// of a minimiser supports exactly two).
pub fn enumerate_configurations(m: usize, k: usize, beta: f64, refined: bool) -> Result<Vec<Configuration>> {
    enumerate_configurations_with(m, k, beta, refined, &TableOptions::default())
}

pub fn enumerate_configurations_with(
    m: usize,
    k: usize,
    beta: f64,
    refined: bool,
    opts: &TableOptions,
) -> Result<Vec<Configuration>> {
    if m < 2 || k < 2 {
        return domain(format!("configurations need m >= 2 and k >= 2, got m={m}, k={k}"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    let cap = certified_floor(m, k, beta, opts)?.max(0) as usize;
    let per = if refined { 3 } else { 2 };
    let mut out = Vec::new();
    for k2 in 0..=cap / 2 {
        for k1 in 0..=cap - 2 * k2 {
            if admissible(k, k1, k2, per) {
                out.push(Configuration::new(k1, k2));
            }
        }
    }
    out.sort_by_key(|c| (c.omega, c.k1));
    Ok(out)
}

/// [`enumerate_configurations`] for a given constraint. For the boundary
/// measure the ratio rule is replaced by the component bound
/// `ω ≤ 1 + ⌊2^{−(m−1)/m}(…)⌋`, and at most one component may support a
/// single eigenvalue.
pub fn enumerate_configurations_for(constraint: &ConstraintFunctional, k: usize, refined: bool) -> Result<Vec<Configuration>> {
    let m = constraint.dimension;
    if constraint.kind != ConstraintKind::HausdorffBoundary {
        return enumerate_configurations(m, k, constraint.beta, refined);
    }
    let omega_max = hausdorff_component_bound_with(m, k, &TableOptions::default())?
        .omega_max
        .expect("boundary bound is always applicable") as usize;
    let per = if refined { 3 } else { 2 };
    let mut out = Vec::new();
    for k1 in 0..=1 {
        for k2 in 0..=omega_max {
            if k1 + k2 <= omega_max && admissible(k, k1, k2, per) {
                out.push(Configuration::new(k1, k2));
            }
        }
    }
    out.sort_by_key(|c| (c.omega, c.k1));
    Ok(out)
}
