//! Command-line front end. [`run`] parses `argv`, runs one command, writes
//! its CSV/JSON outputs under `--out` and finishes with `manifest.json`.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed or the
//! computation broke down, 2 on a usage error.
//!
//! Parallel work runs on a rayon pool sized by `DIRICHLET_EIGEN_WORKERS`
//! (default: available parallelism).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bessel::DEFAULT_ZERO_TOL;
use crate::bounds::{
    asymptotic_omega_certificate, ball_not_minimiser_certificate, corollary5_tables, enumerate_configurations_with,
    lambda2_star_bounds, theorem2v_table, write_reports_csv, BetaMode, BoundReport, FloorStatus, TableOptions,
    ASYMPTOTIC_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::experiments::{
    ellipse_experiment, lemma6_experiment, optimize_lambda_k_with, quadrature_report, torsion_check, write_json_line,
    write_rows_csv, Check, EllipseConfig, OptimizerOptions, OverlapConfig, TorsionShape,
};
use crate::fem2d::{triangulate_convex, ConvexDomain2D, EigenOptions, DEFAULT_EIGEN_TOL};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "DIRICHLET_EIGEN_WORKERS";

pub const MANIFEST_NAME: &str = "manifest.json";

/// Record of one invocation, written after every other output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub outputs: Vec<PathBuf>,
    pub wall_time_seconds: f64,
    pub passed: bool,
}

#[derive(Debug, Parser)]
#[command(name = "dirichlet-eigen", version, about = "Dirichlet eigenvalue bounds, tables and planar experiments")]
struct Cli {
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance override: Bessel zeros for tables, solver residual for FEM
    /// runs, agreement for the quadrature check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Component-count tables.
    #[command(subcommand)]
    Tables(TablesCmd),
    /// Closed-form bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Certificates from Bessel zeros.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Admissible (k1, k2) component configurations of a minimiser.
    Configs(ConfigsArgs),
    /// Numerical experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    /// Minimise perimeter² λ_k over convex polygons.
    Optimize(OptimizeArgs),
    /// Torsional rigidity by FEM and the eigenvalue bound it implies.
    TorsionCheck(TorsionArgs),
}

#[derive(Debug, Subcommand)]
enum TablesCmd {
    /// ω bound for the boundary-measure problem, one row per m.
    Theorem2v {
        #[arg(long)]
        m_max: usize,
    },
    /// ω bound under a homogeneous constraint of degree β.
    Corollary5 {
        #[arg(long, value_enum)]
        beta: BetaArg,
        #[arg(long)]
        m_max: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BetaArg {
    #[value(name = "m")]
    M,
    #[value(name = "m+2")]
    MPlus2,
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    /// Bracket on λ₂* in dimension m.
    Lambda2star {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CertifyCmd {
    /// The ball does not minimise λ₂ under the boundary-measure constraint.
    BallNotMinimiser(BallArgs),
    /// ω ≤ 4 for m ≥ 2¹⁵ from the asymptotic zero bracket.
    OmegaAsymptotic {
        #[arg(long, default_value_t = ASYMPTOTIC_THRESHOLD)]
        m: usize,
    },
}

#[derive(Debug, Args)]
struct BallArgs {
    /// Dimension to certify.
    #[arg(long, conflicts_with = "asymptotic")]
    m: Option<usize>,
    /// Certify every dimension from 3 to this value.
    #[arg(long, conflicts_with_all = ["m", "asymptotic"])]
    m_max: Option<usize>,
    /// Use the asymptotic bracket at m = 2¹⁵.
    #[arg(long)]
    asymptotic: bool,
}

#[derive(Debug, Args)]
struct ConfigsArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// A number, or one of `m-1`, `m`, `m+2`.
    #[arg(long)]
    beta: String,
    /// Components other than single-eigenvalue ones support at least three.
    #[arg(long)]
    refined: bool,
}

#[derive(Debug, Subcommand)]
enum ExperimentCmd {
    /// Perimeter² λ₂ on ellipses with semi-axes (1, 1+t).
    Ellipse {
        #[arg(long, default_value_t = 0.02)]
        h: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.04, 0.06, 0.08])]
        t: Vec<f64>,
    },
    /// Two overlapping disks against one truncated disk.
    Lemma6 {
        #[arg(long, default_value_t = 0.02)]
        h: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.05, 0.1])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// The 3/4 identity for the second disk eigenfunction.
    Quadrature,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 16)]
    vertices: usize,
    #[arg(long)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mesh size at perimeter 2π.
    #[arg(long, default_value_t = 0.03)]
    h: f64,
}

#[derive(Debug, Args)]
struct TorsionArgs {
    #[arg(long, value_enum)]
    shape: ShapeArg,
    #[arg(long, default_value_t = 0.05)]
    h: f64,
    #[arg(long, default_value_t = 50)]
    k_max: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    Disk,
    Square,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<PathBuf>,
    parameters: BTreeMap<String, String>,
}

impl Outputs {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let p = self.path(name);
        write_json_line(&p, value)
    }

    fn json_lines<T: Serialize>(&mut self, name: &str, values: &[T]) -> Result<()> {
        let p = self.path(name);
        let mut text = String::new();
        for v in values {
            text.push_str(&serde_json::to_string(v)?);
            text.push('\n');
        }
        fs::write(p, text)?;
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let p = self.path(name);
        write_rows_csv(&p, header, rows)
    }

    fn text_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let p = self.path(name);
        let mut w = csv::Writer::from_path(p)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    fn reports(&mut self, stem: &str, reports: &[BoundReport]) -> Result<()> {
        let p = self.path(&format!("{stem}.csv"));
        write_reports_csv(reports, fs::File::create(p)?)?;
        self.json_lines(&format!("{stem}.jsonl"), reports)
    }
}

fn print_checks(checks: &[Check]) -> bool {
    for c in checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    crate::experiments::all_passed(checks)
}

fn table_options(tol: Option<f64>) -> TableOptions {
    TableOptions { tol: tol.unwrap_or(DEFAULT_ZERO_TOL), ..TableOptions::default() }
}

fn eigen_options(tol: Option<f64>) -> EigenOptions {
    EigenOptions { tol: tol.unwrap_or(DEFAULT_EIGEN_TOL), ..EigenOptions::default() }
}

fn parse_beta(text: &str, m: usize) -> Result<f64> {
    let mf = m as f64;
    match text.trim() {
        "m-1" => Ok(mf - 1.0),
        "m" => Ok(mf),
        "m+2" => Ok(mf + 2.0),
        s => s.parse::<f64>().map_err(|_| Error::Domain(format!("cannot read beta {s:?}"))),
    }
}

fn table_summary(rows: &[BoundReport]) -> bool {
    let bad = rows.iter().filter(|r| r.err_flag == FloorStatus::Indeterminate).count();
    let mut runs: Vec<(usize, usize, Option<u64>)> = Vec::new();
    for r in rows {
        match runs.last_mut() {
            Some(last) if last.2 == r.omega_max => last.1 = r.dimension,
            _ => runs.push((r.dimension, r.dimension, r.omega_max)),
        }
    }
    for (a, b, w) in runs {
        let w = w.map_or_else(|| "n/a".to_string(), |w| w.to_string());
        println!("m = {a}..={b}: omega_max = {w}");
    }
    println!("{} rows, {bad} indeterminate", rows.len());
    bad == 0
}

fn execute(cli: &Cli, out: &mut Outputs) -> Result<bool> {
    let tol = cli.tol;
    match &cli.command {
        Command::Tables(TablesCmd::Theorem2v { m_max }) => {
            out.param("m_max", m_max);
            let rows = theorem2v_table(*m_max, &table_options(tol))?;
            out.reports("theorem2v", &rows)?;
            Ok(table_summary(&rows))
        }
        Command::Tables(TablesCmd::Corollary5 { beta, m_max }) => {
            let (mode, stem) = match beta {
                BetaArg::M => (BetaMode::LebesgueMeasure, "corollary5_beta_m"),
                BetaArg::MPlus2 => (BetaMode::TorsionalRigidity, "corollary5_beta_m_plus_2"),
            };
            out.param("beta", if matches!(beta, BetaArg::M) { "m" } else { "m+2" });
            out.param("m_max", m_max);
            let rows = corollary5_tables(mode, *m_max, &table_options(tol))?;
            out.reports(stem, &rows)?;
            Ok(table_summary(&rows))
        }
        Command::Bounds(BoundsCmd::Lambda2star { m }) => {
            out.param("m", m);
            let e = lambda2_star_bounds(*m)?;
            out.json("lambda2star.json", &e)?;
            out.csv(
                "lambda2star.csv",
                &["m", "lower", "upper", "gap"],
                &[vec![*m as f64, e.lower, e.upper, e.gap]],
            )?;
            println!("{:.12} <= lambda2* <= {:.12} (ratio {:.12})", e.lower, e.upper, e.gap);
            Ok(e.lower <= e.upper)
        }
        Command::Certify(CertifyCmd::BallNotMinimiser(args)) => {
            let dims: Vec<usize> = match (args.m, args.m_max, args.asymptotic) {
                (Some(m), None, false) => vec![m],
                (None, Some(hi), false) => (3..=hi).collect(),
                (None, None, true) => vec![ASYMPTOTIC_THRESHOLD],
                _ => return Err(Error::Domain("give exactly one of --m, --m-max, --asymptotic".into())),
            };
            out.param("dimensions", format!("{}..={}", dims[0], dims[dims.len() - 1]));
            let certs = dims.iter().map(|&m| ball_not_minimiser_certificate(m)).collect::<Result<Vec<_>>>()?;
            out.json_lines("ball_not_minimiser.jsonl", &certs)?;
            out.csv(
                "ball_not_minimiser.csv",
                &["m", "second_zero", "threshold", "margin", "margin_err", "certified"],
                &certs
                    .iter()
                    .map(|c| {
                        let ok = if c.certified { 1.0 } else { 0.0 };
                        vec![c.dimension as f64, c.second_zero, c.threshold, c.margin, c.margin_err, ok]
                    })
                    .collect::<Vec<_>>(),
            )?;
            let all = certs.iter().all(|c| c.certified);
            if let [c] = certs.as_slice() {
                println!("{}", c.certified);
                println!("margin {:.10} ± {:.1e} ({:?})", c.margin, c.margin_err, c.path);
            } else {
                println!("{all}");
                let worst = certs.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).expect("nonempty");
                println!("smallest margin {:.10} at m = {}", worst.margin, worst.dimension);
            }
            Ok(all)
        }
        Command::Certify(CertifyCmd::OmegaAsymptotic { m }) => {
            out.param("m", m);
            let c = asymptotic_omega_certificate(*m)?;
            out.json("omega_asymptotic.json", &c)?;
            println!("omega <= {} at m = {m}; uniform bound {}; holds: {}", c.omega_at_m, c.uniform_omega, c.holds);
            Ok(c.holds)
        }
        Command::Configs(a) => {
            let beta = parse_beta(&a.beta, a.m)?;
            out.param("m", a.m);
            out.param("k", a.k);
            out.param("beta", beta);
            out.param("refined", a.refined);
            let configs = enumerate_configurations_with(a.m, a.k, beta, a.refined, &table_options(tol))?;
            let rows: Vec<Vec<String>> = configs
                .iter()
                .map(|c| vec![c.k1.to_string(), c.k2.to_string(), c.omega.to_string(), c.describe(a.k)])
                .collect();
            out.text_csv("configs.csv", &["k1", "k2", "omega", "description"], &rows)?;
            out.json_lines("configs.jsonl", &configs)?;
            for c in &configs {
                println!("({}, {}) {}", c.k1, c.k2, c.describe(a.k));
            }
            Ok(!configs.is_empty())
        }
        Command::Experiment(ExperimentCmd::Quadrature) => {
            let tol = tol.unwrap_or(1e-8);
            out.param("tol", tol);
            let r = quadrature_report(tol)?;
            out.json("quadrature.json", &r)?;
            out.csv(
                "quadrature.csv",
                &["order", "ratio", "orthogonality"],
                &[vec![r.radial_order as f64, r.ratio, r.orthogonality]],
            )?;
            println!("ratio {:.15}", r.ratio);
            Ok(print_checks(&r.checks))
        }
        Command::Experiment(ExperimentCmd::Ellipse { h, t }) => {
            out.param("h", h);
            out.param("t", format!("{t:?}"));
            let cfg = EllipseConfig { t_values: t.clone(), target_h: *h, eigen: eigen_options(tol), ..EllipseConfig::default() };
            let r = ellipse_experiment(&cfg)?;
            out.json("ellipse.json", &r)?;
            let rows: Vec<Vec<f64>> = std::iter::once(&r.disk)
                .chain(&r.points)
                .map(|p| vec![p.t, p.perimeter, p.h_coarse, p.h_fine, p.lambda2_coarse, p.lambda2_fine, p.lambda2, p.f])
                .collect();
            out.csv("ellipse.csv", &["t", "perimeter", "h_coarse", "h_fine", "lambda2_coarse", "lambda2_fine", "lambda2", "f"], &rows)?;
            println!("fitted slope {:.5}", r.fitted_slope);
            Ok(print_checks(&r.checks))
        }
        Command::Experiment(ExperimentCmd::Lemma6 { h, eps, radius }) => {
            out.param("h", h);
            out.param("eps", format!("{eps:?}"));
            out.param("radius", radius);
            let cfg = OverlapConfig {
                radius: *radius,
                eps_values: eps.clone(),
                target_h: *h,
                eigen: eigen_options(tol),
                ..OverlapConfig::default()
            };
            let r = lemma6_experiment(&cfg)?;
            out.json("lemma6.json", &r)?;
            let rows: Vec<Vec<f64>> = r
                .points
                .iter()
                .map(|p| vec![p.eps, p.h_coarse, p.lambda2_union, p.lambda1_half_coarse, p.lambda1_half, p.excess])
                .collect();
            out.csv("lemma6.csv", &["eps", "h", "lambda2_union", "lambda1_half_mesh", "lambda1_half", "excess"], &rows)?;
            println!("fitted exponent {:.4}", r.fitted_exponent);
            Ok(print_checks(&r.checks))
        }
        Command::Optimize(a) => {
            out.param("k", a.k);
            out.param("vertices", a.vertices);
            out.param("iters", a.iters);
            out.param("seed", a.seed);
            out.param("h", a.h);
            let opts = OptimizerOptions {
                target_h: a.h,
                eigen: EigenOptions { tol: tol.unwrap_or(OptimizerOptions::default().eigen.tol), ..EigenOptions::default() },
                ..OptimizerOptions::default()
            };
            let s = optimize_lambda_k_with(a.k, a.vertices, a.iters, a.seed, &opts)?;
            out.json("optimize.json", &s)?;
            let history: Vec<Vec<f64>> = s.history.iter().enumerate().map(|(i, v)| vec![i as f64, *v]).collect();
            out.csv("history.csv", &["iteration", "objective"], &history)?;
            let poly: Vec<Vec<f64>> = s.vertices.iter().map(|p| vec![p[0], p[1]]).collect();
            out.csv("polygon.csv", &["x", "y"], &poly)?;
            let mesh = triangulate_convex(&ConvexDomain2D::polygon(s.vertices.clone())?, a.h)?;
            mesh.write_off(fs::File::create(out.path("polygon_mesh.off"))?)?;
            if let Some(w) = &s.warning {
                eprintln!("warning: {w}");
            }
            println!("objective {:.8} after {} sweeps ({} moves)", s.objective, s.iteration, s.accepted_moves);
            let checks = vec![
                Check::new("history_nonincreasing", s.history.windows(2).all(|w| w[1] <= w[0]), format!("{} entries", s.history.len())),
                Check::new(
                    "convex_states",
                    s.trajectory.iter().all(|p| ConvexDomain2D::polygon(p.clone()).is_ok()),
                    format!("{} states", s.trajectory.len()),
                ),
            ];
            Ok(print_checks(&checks))
        }
        Command::TorsionCheck(a) => {
            let shape = match a.shape {
                ShapeArg::Disk => TorsionShape::Disk,
                ShapeArg::Square => TorsionShape::Square,
            };
            out.param("shape", shape);
            out.param("h", a.h);
            out.param("k_max", a.k_max);
            let r = torsion_check(shape, a.h, a.k_max)?;
            out.json("torsion.json", &r)?;
            let rows: Vec<Vec<f64>> = r.bounds.iter().map(|(k, b, l)| vec![*k as f64, *b, *l]).collect();
            out.csv("torsion_bounds.csv", &["k", "lower_bound", "lambda_k"], &rows)?;
            let domain = match shape {
                TorsionShape::Disk => ConvexDomain2D::disk(1.0)?,
                TorsionShape::Square => ConvexDomain2D::square(1.0)?,
            };
            triangulate_convex(&domain, a.h)?.write_off(fs::File::create(out.path("mesh.off"))?)?;
            println!("rigidity {:.10} (exact {:.10})", r.rigidity, r.exact_rigidity);
            Ok(print_checks(&r.checks))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Tables(TablesCmd::Theorem2v { .. }) => "tables theorem2v",
        Command::Tables(TablesCmd::Corollary5 { .. }) => "tables corollary5",
        Command::Bounds(BoundsCmd::Lambda2star { .. }) => "bounds lambda2star",
        Command::Certify(CertifyCmd::BallNotMinimiser(_)) => "certify ball-not-minimiser",
        Command::Certify(CertifyCmd::OmegaAsymptotic { .. }) => "certify omega-asymptotic",
        Command::Configs(_) => "configs",
        Command::Experiment(ExperimentCmd::Ellipse { .. }) => "experiment ellipse",
        Command::Experiment(ExperimentCmd::Lemma6 { .. }) => "experiment lemma6",
        Command::Experiment(ExperimentCmd::Quadrature) => "experiment quadrature",
        Command::Optimize(_) => "optimize",
        Command::TorsionCheck(_) => "torsion-check",
    }
}

fn worker_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err(format!("{WORKERS_ENV} must be a positive integer, got 0"));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| e.to_string())
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    fs::write(dir.join(MANIFEST_NAME), text + "\n")?;
    Ok(())
}

/// Run the tool on `argv` (program name first) and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let Some(dir) = cli.out.clone() else {
        eprintln!("error: --out DIR is required");
        return 2;
    };
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            eprintln!("error: --tol must be positive, got {t}");
            return 2;
        }
    }
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = fs::create_dir_all(&dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return 1;
    }
    let start = Instant::now();
    let mut out = Outputs { dir: dir.clone(), files: Vec::new(), parameters: BTreeMap::new() };
    if let Some(t) = cli.tol {
        out.param("tol", t);
    }
    out.param("workers", pool.current_num_threads());
    let result = pool.install(|| execute(&cli, &mut out));
    let passed = match result {
        Ok(p) => p,
        Err(Error::Domain(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let manifest = RunManifest {
        command: command_name(&cli.command).to_string(),
        parameters: out.parameters,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: out.files,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        passed,
    };
    if let Err(e) = write_manifest(&dir, &manifest) {
        eprintln!("error: {e}");
        return 1;
    }
    if passed {
        0
    } else {
        1
    }
}
