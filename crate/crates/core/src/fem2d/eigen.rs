use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assemble::{assemble, FemSystem};
use super::mesh::Mesh2D;
use super::sparse::{CsrMatrix, EnvelopeCholesky};
use crate::error::{Error, Result};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Lowest eigenpairs of `K x = λ M x` over the interior vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub eigenvalues: Vec<f64>,
    /// `M`-orthonormal, indexed by interior degree of freedom.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖K x − λ M x‖ / (λ ‖M x‖)` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Mesh vertex of each degree of freedom.
    pub vertex_of_dof: Vec<usize>,
    pub vertex_count: usize,
}

impl EigenSolution {
    /// Eigenvector `i` over all mesh vertices, zero on the boundary.
    pub fn full_vector(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.vertex_count];
        for (d, &v) in self.vertex_of_dof.iter().enumerate() {
            out[v] = self.eigenvectors[i][d];
        }
        out
    }

    /// CSV with one row per mesh vertex: `vertex,x,y,u1,u2,…`.
    pub fn write_csv<W: Write>(&self, mesh: &Mesh2D, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["vertex".to_string(), "x".into(), "y".into()];
        header.extend((1..=self.eigenvalues.len()).map(|i| format!("u{i}")));
        w.write_record(&header)?;
        let full: Vec<Vec<f64>> = (0..self.eigenvalues.len()).map(|i| self.full_vector(i)).collect();
        for (v, p) in mesh.vertices.iter().enumerate() {
            let mut rec = vec![v.to_string(), format!("{:?}", p[0]), format!("{:?}", p[1])];
            rec.extend(full.iter().map(|u| format!("{:?}", u[v])));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_EIGEN_TOL, max_iterations: 2000, seed: 0x5eed }
    }
}

/// The `count` smallest Dirichlet eigenpairs on `mesh`.
pub fn dirichlet_eigs(mesh: &Mesh2D, count: usize, tol: f64) -> Result<EigenSolution> {
    dirichlet_eigs_with(mesh, count, &EigenOptions { tol, ..EigenOptions::default() })
}

pub fn dirichlet_eigs_with(mesh: &Mesh2D, count: usize, opts: &EigenOptions) -> Result<EigenSolution> {
    let sys = assemble(mesh)?;
    let n = sys.dofs.len();
    if count == 0 || count > n / 4 {
        return Err(Error::Domain(format!("count must lie in 1..={} for {n} interior vertices, got {count}", n / 4)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let factor = EnvelopeCholesky::factor(&sys.stiffness)?;
    let (eigenvalues, eigenvectors, residuals, iterations) = subspace_iteration(&sys, &factor, count, opts)?;
    Ok(EigenSolution {
        eigenvalues,
        eigenvectors,
        residuals,
        iterations,
        vertex_of_dof: sys.dofs.vertex_of_dof.clone(),
        vertex_count: mesh.vertex_count(),
    })
}

type Columns = Vec<Vec<f64>>;

fn mat_cols(a: &CsrMatrix, x: &Columns) -> Columns {
    x.par_iter().map(|c| a.mul_vec(c)).collect()
}

fn gram(a: &Columns, b: &Columns) -> DMatrix<f64> {
    let p = a.len();
    let mut g = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let v: f64 = a[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// `Y Z` for column blocks `Y` and a small dense `Z`.
fn combine(y: &Columns, z: &DMatrix<f64>, cols: usize) -> Columns {
    (0..cols)
        .into_par_iter()
        .map(|j| {
            let mut out = vec![0.0; y[0].len()];
            for (k, yk) in y.iter().enumerate() {
                let c = z[(k, j)];
                for (o, v) in out.iter_mut().zip(yk) {
                    *o += c * v;
                }
            }
            out
        })
        .collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Block inverse iteration with Rayleigh–Ritz on `K⁻¹ M`. The block is wider
/// than `count` so the wanted pairs converge at rate `λ_count / λ_{p+1}`.
fn subspace_iteration(
    sys: &FemSystem,
    factor: &EnvelopeCholesky,
    count: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Columns, Vec<f64>, usize)> {
    let n = sys.dofs.len();
    let p = (2 * count).max(count + 8).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x: Columns = (0..p).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let mut mx = mat_cols(&sys.mass, &x);
    let mut worst = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let y: Columns = mx.par_iter().map(|b| factor.solve(b)).collect();
        let ky = mat_cols(&sys.stiffness, &y);
        let my = mat_cols(&sys.mass, &y);
        let kr = gram(&y, &ky);
        let mr = gram(&y, &my);
        let chol = mr
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Convergence(format!("Ritz mass matrix lost definiteness at iteration {it}")))?;
        let l_inv = chol.l().try_inverse().ok_or_else(|| Error::Convergence("singular Ritz factor".into()))?;
        let c = &l_inv * &kr * l_inv.transpose();
        let c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let q = DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]);
        let z = l_inv.transpose() * q;

        let kx = combine(&ky, &z, p);
        mx = combine(&my, &z, p);
        let residuals: Vec<f64> = (0..count)
            .map(|i| {
                let r: Vec<f64> = kx[i].iter().zip(&mx[i]).map(|(a, b)| a - theta[i] * b).collect();
                norm(&r) / (theta[i].abs() * norm(&mx[i]))
            })
            .collect();
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= opts.tol {
            let x = combine(&y, &z, count);
            return Ok((theta[..count].to_vec(), x, residuals, it));
        }
    }
    Err(Error::Convergence(format!(
        "subspace iteration stopped after {} iterations with worst relative residual {worst:e} (tol {:e}, block {p})",
        opts.max_iterations, opts.tol
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::{triangulate_convex, ConvexDomain2D};
    use std::f64::consts::PI;

    #[test]
    fn square_spectrum() {
        let mesh = triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.05).unwrap();
        let s = dirichlet_eigs(&mesh, 3, 1e-9).unwrap();
        assert!((s.eigenvalues[0] / (2.0 * PI * PI) - 1.0).abs() < 5e-3);
        // P1 error grows like λh², so 5π² needs the finer mesh for 0.5%
        for got in &s.eigenvalues[1..] {
            assert!((got / (5.0 * PI * PI) - 1.0).abs() < 1e-2, "{got}");
        }
        assert!(s.residuals.iter().all(|r| *r <= 1e-9));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let fine = triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.025).unwrap();
        let s = dirichlet_eigs(&fine, 3, 1e-9).unwrap();
        for got in &s.eigenvalues[1..] {
            assert!((got / (5.0 * PI * PI) - 1.0).abs() < 5e-3, "{got}");
        }
    }

    #[test]
    fn mass_orthonormal() {
        let mesh = triangulate_convex(&ConvexDomain2D::disk(1.0).unwrap(), 0.15).unwrap();
        let s = dirichlet_eigs(&mesh, 4, 1e-9).unwrap();
        let sys = assemble(&mesh).unwrap();
        for i in 0..4 {
            let mi = sys.mass.mul_vec(&s.eigenvectors[i]);
            for j in 0..4 {
                let v: f64 = mi.iter().zip(&s.eigenvectors[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-8, "({i},{j}) {v}");
            }
        }
    }

    #[test]
    fn rectangle_ground_state_and_csv() {
        let mesh = triangulate_convex(&ConvexDomain2D::rectangle(2.0, 1.0).unwrap(), 0.05).unwrap();
        let s = dirichlet_eigs(&mesh, 1, 1e-8).unwrap();
        let want = 1.25 * PI * PI;
        assert!((s.eigenvalues[0] / want - 1.0).abs() < 1e-2);
        let mut buf = Vec::new();
        s.write_csv(&mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("vertex,x,y,u1\n"));
        assert_eq!(text.lines().count(), mesh.vertex_count() + 1);
    }

    #[test]
    fn rejects_too_many_pairs() {
        let mesh = triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.5).unwrap();
        assert!(matches!(dirichlet_eigs(&mesh, 50, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn iteration_cap_reports_convergence_error() {
        let mesh = triangulate_convex(&ConvexDomain2D::square(1.0).unwrap(), 0.1).unwrap();
        let opts = EigenOptions { tol: 1e-14, max_iterations: 2, ..EigenOptions::default() };
        assert!(matches!(dirichlet_eigs_with(&mesh, 2, &opts), Err(Error::Convergence(_))));
    }
}
