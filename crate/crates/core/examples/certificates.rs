//! The ball is not a λ₂ minimiser under the boundary-measure constraint,
//! and ω ≤ 4 from m = 2¹⁵ on.

use dirichlet_eigen::bounds::{asymptotic_omega_certificate, ball_not_minimiser_certificate, lambda2_star_bounds};

fn main() -> dirichlet_eigen::Result<()> {
    for m in [3, 4, 10, 100, 1000, 1 << 15] {
        let c = ball_not_minimiser_certificate(m)?;
        println!(
            "m = {m:<6} j_(m/2) = {:<12.6} threshold = {:<12.6} margin = {:+.3e} ({:?}) certified: {}",
            c.second_zero, c.threshold, c.margin, c.path, c.certified
        );
    }

    let a = asymptotic_omega_certificate(1 << 15)?;
    println!("ω(2¹⁵) ≤ {}, uniform bound {} for every larger m: {}", a.omega_at_m, a.uniform_omega, a.holds);

    let s = lambda2_star_bounds(3)?;
    println!("λ₂* in R³ lies in [{:.6}, {:.6}]", s.lower, s.upper);
    Ok(())
}
