//! Pattern search for a convex polygon with small perimeter² λ_k.
//!
//! `cargo run --release --example optimize_polygon -- <k> <sweeps> <seed>`

use std::f64::consts::TAU;

use dirichlet_eigen::experiments::{optimize_lambda_k_with, OptimizerOptions};
use dirichlet_eigen::ball_eigenvalues;

fn main() -> dirichlet_eigen::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let k = args.next().unwrap_or(2) as usize;
    let sweeps = args.next().unwrap_or(1) as usize;
    let seed = args.next().unwrap_or(0);

    let opts = OptimizerOptions { target_h: 0.06, ..OptimizerOptions::default() };
    let s = optimize_lambda_k_with(k, 12, sweeps, seed, &opts)?;
    let disk = TAU * TAU * ball_eigenvalues(2, k)?.lambda(k).unwrap();
    for (i, v) in s.history.iter().enumerate() {
        println!("sweep {i}: {v:.4} ({:.4} × disk)", v / disk);
    }
    println!("{} moves accepted out of {} evaluations", s.accepted_moves, s.evaluations);
    for v in &s.vertices {
        println!("{:.6} {:.6}", v[0], v[1]);
    }
    Ok(())
}
