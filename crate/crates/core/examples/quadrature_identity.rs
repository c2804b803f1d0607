//! ∫ x₂² |∇φ|² / ∫ |∇φ|² = 3/4 over the half disk for the second disk
//! eigenfunction φ = J₁(j₁ r) sin θ.

use dirichlet_eigen::experiments::{half_disk_integrals, quadrature_report};

fn main() -> dirichlet_eigen::Result<()> {
    for n in [8, 16, 32, 64] {
        let (num, den) = half_disk_integrals(n, n)?;
        println!("order {n:>3}: ratio = {:.15}", num / den);
    }
    let r = quadrature_report(1e-10)?;
    println!("converged ratio {:.15} at order {} × {}", r.ratio, r.radial_order, r.angular_order);
    println!("orthogonality residual {:.2e}", r.orthogonality);
    Ok(())
}
