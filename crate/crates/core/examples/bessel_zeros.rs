//! First few zeros of J_ν, plus the asymptotic bracket for a large order.

use dirichlet_eigen::{asymptotic_bracket, bessel_j, nth_zero, Order};

fn main() -> dirichlet_eigen::Result<()> {
    for nu in [0.0, 0.5, 1.0, 2.5] {
        let order = Order::new(nu)?;
        let zeros: Vec<String> =
            (1..=4).map(|n| nth_zero(order, n, 1e-14).map(|z| format!("{:.12}", z.value))).collect::<Result<_, _>>()?;
        println!("ν = {nu:<4} zeros: {}", zeros.join("  "));
    }
    let j = nth_zero(Order::new(0.0)?, 1, 1e-14)?.value;
    println!("J_0({j}) = {:e}", bessel_j(Order::new(0.0)?, j)?);

    let b = asymptotic_bracket(Order::new(16384.0)?)?;
    println!("j_16384 ∈ [{:.6}, {:.6}]", b.lower, b.upper);
    Ok(())
}
