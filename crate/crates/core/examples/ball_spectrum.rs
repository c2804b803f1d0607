//! Dirichlet spectrum of the unit ball in a few dimensions.
//!
//! `cargo run --example ball_spectrum -- 6 60`

use dirichlet_eigen::{ball_eigenvalues, harmonic_multiplicity};

fn main() -> dirichlet_eigen::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let m = args.next().unwrap_or(3);
    let count = args.next().unwrap_or(30);

    let s = ball_eigenvalues(m, count)?;
    println!("B_{m}: first {count} eigenvalues in {} levels", s.levels.len());
    for level in &s.levels {
        println!(
            "  l = {:<3} n = {:<2} λ = {:<14.8} multiplicity {}",
            level.degree, level.radial_index, level.eigenvalue, level.multiplicity
        );
    }
    println!("λ_1 = {:.10}, λ_{count} = {:.10}", s.lambda(1).unwrap(), s.lambda(count).unwrap());
    println!("N({m}, 3) = {}", harmonic_multiplicity(m, 3)?);
    Ok(())
}
