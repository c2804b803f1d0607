//! λ₂ of two overlapping disks against λ₁ of one truncated disk, and the
//! rate at which the truncated disk approaches the full one.

use dirichlet_eigen::experiments::{lemma6_experiment, OverlapConfig};

fn main() -> dirichlet_eigen::Result<()> {
    let config = OverlapConfig { target_h: 0.04, eps_values: vec![0.05, 0.1, 0.2], ..OverlapConfig::default() };
    let r = lemma6_experiment(&config)?;
    println!("λ₁(B) = {:.8}", r.lambda1_ball);
    for p in &r.points {
        println!(
            "ε = {:<5} λ₂(Ω(ε)) = {:.8}  λ₁(B(ε)) = {:.8}  excess {:.3e}",
            p.eps, p.lambda2_union, p.lambda1_half_coarse, p.excess
        );
    }
    println!("excess ≈ {:.3} ε^{:.3}", r.fitted_constant, r.fitted_exponent);
    for c in &r.checks {
        println!("[{}] {}", if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
