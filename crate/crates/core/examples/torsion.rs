//! Torsional rigidity of the disk and square and the eigenvalue lower bound
//! it gives.

use dirichlet_eigen::experiments::{torsion_check, TorsionShape};

fn main() -> dirichlet_eigen::Result<()> {
    for shape in [TorsionShape::Disk, TorsionShape::Square] {
        let r = torsion_check(shape, 0.05, 50)?;
        println!("{shape}: P = {:.8} (exact {:.8}), P(2Ω)/P(Ω) = {:.4}", r.rigidity, r.exact_rigidity, r.scaling_ratio);
        for &(k, bound, lambda) in r.bounds.iter().filter(|b| [1, 2, 10, 50].contains(&b.0)) {
            println!("  k = {k:<3} bound {bound:>10.4} ≤ λ_k {lambda:>10.4}");
        }
        for c in &r.checks {
            println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
    }
    Ok(())
}
