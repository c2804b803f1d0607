//! Closed-form eigenvalue bounds, component-count bounds and the tables built
//! from them.
//!
//! Everything here reduces to ratios of Bessel zeros. Quantities that are
//! floored are carried as certified intervals (see [`Interval`]) so a table
//! entry is either exact or explicitly flagged as indeterminate.

mod certificate;
mod components;
mod configurations;
mod geometry;
mod isoperimetric;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use certificate::{ball_not_minimiser_certificate, ball_not_minimiser_check, CertificatePath, NonMinimiserCertificate};
pub use components::{
    asymptotic_omega_certificate, corollary5_row, corollary5_tables, hausdorff_component_bound,
    hausdorff_component_bound_with, t_constraint_component_bound, t_constraint_component_bound_with, theorem2v_row,
    theorem2v_table, AsymptoticOmegaCertificate, BetaMode, TableOptions, ASYMPTOTIC_THRESHOLD,
};
pub use configurations::{
    enumerate_configurations, enumerate_configurations_for, enumerate_configurations_with, Configuration,
};
pub use geometry::{ball_torsion, ball_volume, ln_ball_volume, ln_sphere_area, sphere_area};
pub use isoperimetric::{
    isoperimetric_lower_bound, lambda2_star_bounds, torsion_bound_constant, torsion_eigenvalue_lower_bound,
    Lambda2StarEstimate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintKind {
    HausdorffBoundary,
    LebesgueMeasure,
    TorsionalRigidity,
}

impl ConstraintKind {
    /// Scaling exponent of the constraint under dilation in `R^m`.
    pub fn beta(self, m: usize) -> f64 {
        match self {
            Self::HausdorffBoundary => m as f64 - 1.0,
            Self::LebesgueMeasure => m as f64,
            Self::TorsionalRigidity => m as f64 + 2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::HausdorffBoundary => "hausdorff",
            Self::LebesgueMeasure => "lebesgue",
            Self::TorsionalRigidity => "torsion",
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The functional held fixed in a variational problem, with its budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintFunctional {
    pub kind: ConstraintKind,
    pub dimension: usize,
    pub beta: f64,
    pub budget: f64,
}

impl ConstraintFunctional {
    pub fn new(kind: ConstraintKind, m: usize, budget: f64) -> Result<Self> {
        if m < 2 {
            return domain(format!("dimension must be at least 2, got {m}"));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return domain(format!("budget must be positive, got {budget}"));
        }
        Ok(Self { kind, dimension: m, beta: kind.beta(m), budget })
    }

    pub fn hausdorff(m: usize, budget: f64) -> Result<Self> {
        Self::new(ConstraintKind::HausdorffBoundary, m, budget)
    }

    pub fn lebesgue(m: usize, budget: f64) -> Result<Self> {
        Self::new(ConstraintKind::LebesgueMeasure, m, budget)
    }

    pub fn torsion(m: usize, budget: f64) -> Result<Self> {
        Self::new(ConstraintKind::TorsionalRigidity, m, budget)
    }

    /// Value of the functional on the unit ball `B_m`.
    pub fn unit_ball_value(&self) -> f64 {
        self.ln_unit_ball_value().exp()
    }

    pub(crate) fn ln_unit_ball_value(&self) -> f64 {
        let m = self.dimension;
        match self.kind {
            ConstraintKind::HausdorffBoundary => ln_sphere_area(m),
            ConstraintKind::LebesgueMeasure => ln_ball_volume(m),
            ConstraintKind::TorsionalRigidity => ln_ball_volume(m) - ((m * (m + 2)) as f64).ln(),
        }
    }
}

/// Closed interval `[lo, hi]` enclosing a computed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(value: f64) -> Self {
        Self { value, lo: value, hi: value }
    }

    /// The integer part when the whole interval shares it.
    pub fn certain_floor(&self) -> Option<i64> {
        let (a, b) = (self.lo.floor(), self.hi.floor());
        (a == b).then_some(a as i64)
    }

    pub fn map_monotone(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { value: f(self.value), lo: f(self.lo), hi: f(self.hi) }
    }
}

/// Whether the integer part entering a report was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorStatus {
    Ok,
    Indeterminate,
}

impl fmt::Display for FloorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ok => "ok",
            Self::Indeterminate => "indeterminate",
        })
    }
}

/// One row of a component-count table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dimension: usize,
    pub k: usize,
    pub beta: f64,
    /// `hausdorff`, `lebesgue`, `torsion`, or `homogeneous` for a generic `β`.
    pub kind: String,
    /// `None` when the bound gives no information ("n/a").
    pub omega_max: Option<u64>,
    pub applicable: bool,
    pub applicability_reason: String,
    /// The quantity that was floored.
    pub bound_value: f64,
    pub bound_interval: Interval,
    pub err_flag: FloorStatus,
    /// Zero tolerance the row was finally computed with.
    pub tol: f64,
}

impl BoundReport {
    pub const CSV_HEADER: [&'static str; 8] = ["m", "k", "beta", "kind", "omega_max", "applicable", "ratio", "err_flag"];

    pub fn csv_record(&self) -> [String; 8] {
        [
            self.dimension.to_string(),
            self.k.to_string(),
            format_number(self.beta),
            self.kind.clone(),
            self.omega_max.map_or_else(|| "n/a".to_string(), |w| w.to_string()),
            self.applicable.to_string(),
            format!("{:.12}", self.bound_value),
            self.err_flag.to_string(),
        ]
    }
}

fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Write reports as CSV with the fixed column schema.
pub fn write_reports_csv<W: std::io::Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BoundReport::CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
