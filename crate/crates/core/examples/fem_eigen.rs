//! P1 Dirichlet eigenvalues of the unit square and disk against the exact
//! values, on a sequence of meshes.

use std::f64::consts::PI;

use dirichlet_eigen::ball_eigenvalues;
use dirichlet_eigen::fem2d::{dirichlet_eigs, triangulate_convex, ConvexDomain2D};

fn main() -> dirichlet_eigen::Result<()> {
    let square_exact = [2.0, 5.0, 5.0, 8.0].map(|c| c * PI * PI);
    let disk_exact = ball_eigenvalues(2, 4)?.values();
    let cases = [
        ("square", ConvexDomain2D::square(1.0)?, square_exact.to_vec()),
        ("disk", ConvexDomain2D::disk(1.0)?, disk_exact),
    ];
    for (name, domain, exact) in &cases {
        for h in [0.2, 0.1, 0.05] {
            let mesh = triangulate_convex(domain, h)?;
            let sol = dirichlet_eigs(&mesh, 4, 1e-10)?;
            let errs: Vec<String> =
                sol.eigenvalues.iter().zip(exact).map(|(a, b)| format!("{:+.3}%", 100.0 * (a / b - 1.0))).collect();
            println!("{name:<6} h = {h:<5} {:>5} vertices  rel. error {}", mesh.vertex_count(), errs.join(" "));
        }
    }
    Ok(())
}
