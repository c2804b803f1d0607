//! Perimeter² λ₂ on slightly elongated ellipses. Coarser than the default
//! configuration so it finishes in a few seconds; pass `full` for the default.

use dirichlet_eigen::experiments::{ellipse_experiment, EllipseConfig};

fn main() -> dirichlet_eigen::Result<()> {
    let config = if std::env::args().any(|a| a == "full") {
        EllipseConfig::default()
    } else {
        EllipseConfig { target_h: 0.05, ..EllipseConfig::default() }
    };
    let r = ellipse_experiment(&config)?;
    println!("disk: f(0) = {:.6} (exact {:.6})", r.disk.f, r.f0_exact);
    for p in &r.points {
        println!("t = {:.2}  perimeter {:.6}  f = {:.6}  f/f(0) = {:.6}", p.t, p.perimeter, p.f, p.f_ratio);
    }
    println!("slope of f(t)/f(0) at t = 0: {:.4}", r.fitted_slope);
    Ok(())
}
