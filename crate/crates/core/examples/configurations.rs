//! Admissible component structures of a λ_k minimiser under a volume
//! constraint (β = m).
//!
//! `cargo run --example configurations -- 8 5`

use dirichlet_eigen::bounds::enumerate_configurations;

fn main() -> dirichlet_eigen::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let m = args.next().unwrap_or(8);
    let k = args.next().unwrap_or(5);

    for refined in [false, true] {
        println!("m = {m}, k = {k}, refined = {refined}");
        for c in enumerate_configurations(m, k, m as f64, refined)? {
            println!("  ω = {}  (k1, k2) = ({}, {})  {}", c.omega, c.k1, c.k2, c.describe(k));
        }
    }
    Ok(())
}
