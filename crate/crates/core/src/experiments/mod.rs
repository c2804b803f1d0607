//! Numerical experiments: the planar ellipse perturbation, the `3/4`
//! quadrature identity behind it, the overlapping-disks estimate, a
//! perimeter-constrained shape optimizer and a torsion validation run.
//!
//! Independent FEM solves inside one experiment are fanned out with rayon and
//! collected in input order, so results do not depend on the thread count.

mod ellipse;
mod optimizer;
mod overlap;
mod quadrature_identity;
mod torsion_check;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fem2d::{dirichlet_eigs_with, triangulate_convex, ConvexDomain2D, EigenOptions, Mesh2D};

pub use ellipse::{ellipse_experiment, ellipse_perimeter_integral, EllipseConfig, EllipsePoint, EllipseReport};
pub use optimizer::{
    convex_hull, optimize_lambda_k, optimize_lambda_k_with, polygon_objective, OptimizerOptions, OptimizerState,
};
pub use overlap::{lemma6_experiment, OverlapConfig, OverlapPoint, OverlapReport};
pub use quadrature_identity::{
    angular_moments, half_disk_integrals, orthogonality_integral, quadrature_ratio_check, quadrature_report,
    QuadratureReport,
};
pub use torsion_check::{torsion_check, TorsionCheckReport, TorsionShape};

/// One pass/fail threshold of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Write `value` as a single JSON line.
pub fn write_json_line<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Write rows of numbers under `header` as CSV.
pub fn write_rows_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|x| format!("{x:?}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares line `y ≈ a + b x`, returned as `(a, b)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// Eliminate the `h²` term from values on two meshes.
pub fn richardson(h_coarse: f64, v_coarse: f64, h_fine: f64, v_fine: f64) -> f64 {
    let (a, b) = (h_coarse * h_coarse, h_fine * h_fine);
    (a * v_fine - b * v_coarse) / (a - b)
}

/// The lowest `count` FEM eigenvalues of `domain` at mesh size `h`, with the
/// mesh that was used.
pub(crate) fn eigenvalues_on(
    domain: &ConvexDomain2D,
    h: f64,
    count: usize,
    opts: &EigenOptions,
) -> Result<(Mesh2D, Vec<f64>)> {
    let mesh = triangulate_convex(domain, h)?;
    let sol = dirichlet_eigs_with(&mesh, count, opts)?;
    Ok((mesh, sol.eigenvalues))
}
