use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fem2d::{dirichlet_eigs_with, shape_metrics, triangulate_convex, ConvexDomain2D, EigenOptions, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Mesh size for every objective evaluation, at perimeter `2π`.
    pub target_h: f64,
    /// First vertex displacement.
    pub initial_step: f64,
    /// The search stops once a failed sweep halves the step below this.
    pub min_step: f64,
    pub eigen: EigenOptions,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self { target_h: 0.03, initial_step: 0.04, min_step: 2.5e-3, eigen: EigenOptions { tol: 1e-7, ..EigenOptions::default() } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub k: usize,
    pub seed: u64,
    /// Best polygon, counterclockwise, centred at its centroid with
    /// perimeter `2π`.
    pub vertices: Vec<Point>,
    /// `perimeter² × λ_k` of `vertices`.
    pub objective: f64,
    /// Completed sweeps.
    pub iteration: usize,
    /// Objective before the first sweep and after each sweep.
    pub history: Vec<f64>,
    /// Best polygon before the first sweep and after each sweep.
    pub trajectory: Vec<Vec<Point>>,
    pub step: f64,
    pub accepted_moves: usize,
    pub evaluations: usize,
    /// Set when the final sweep accepted nothing.
    pub warning: Option<String>,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull, counterclockwise, without collinear points (monotone chain).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Hull of `points`, topped back up to `n` vertices by splitting the longest
/// edges, then centred and scaled to perimeter `2π`.
fn project(points: &[Point], n: usize) -> Result<Vec<Point>> {
    let mut hull = convex_hull(points);
    if hull.len() < 3 {
        return domain("polygon collapsed");
    }
    while hull.len() < n {
        let m = hull.len();
        let i = (0..m)
            .max_by(|&a, &b| edge_len(&hull, a).total_cmp(&edge_len(&hull, b)))
            .expect("hull is not empty");
        let (p, q) = (hull[i], hull[(i + 1) % m]);
        hull.insert(i + 1, [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
    }
    normalise(&hull)
}

fn edge_len(p: &[Point], i: usize) -> f64 {
    let q = p[(i + 1) % p.len()];
    (q[0] - p[i][0]).hypot(q[1] - p[i][1])
}

fn normalise(p: &[Point]) -> Result<Vec<Point>> {
    let d = ConvexDomain2D::polygon(p.to_vec())?;
    let (_, perimeter) = shape_metrics(&d)?;
    let c = d.centroid();
    let s = TAU / perimeter;
    Ok(p.iter().map(|v| [s * (v[0] - c[0]), s * (v[1] - c[1])]).collect())
}

/// `perimeter² × λ_k` of a convex polygon, meshed at `target_h` after
/// scaling to perimeter `2π`. `λ_k` comes from a solve for `k + 2` pairs.
pub fn polygon_objective(vertices: &[Point], k: usize, opts: &OptimizerOptions) -> Result<f64> {
    let p = normalise(vertices)?;
    let mesh = triangulate_convex(&ConvexDomain2D::polygon(p)?, opts.target_h)?;
    let sol = dirichlet_eigs_with(&mesh, k + 2, &opts.eigen)?;
    Ok(TAU * TAU * sol.eigenvalues[k - 1])
}

/// Minimise `perimeter² × λ_k` over convex `n_vertices`-gons, starting from
/// the regular polygon.
pub fn optimize_lambda_k(k: usize, n_vertices: usize, iterations: usize, seed: u64) -> Result<OptimizerState> {
    optimize_lambda_k_with(k, n_vertices, iterations, seed, &OptimizerOptions::default())
}

/// Greedy coordinate pattern search. Each sweep visits every `(vertex, axis)`
/// pair in a seeded random order and tries `+step`, then `−step`; the first
/// strict decrease is kept. A moved polygon is replaced by its convex hull
/// (refilled to `n` vertices) before it is evaluated. A sweep with no
/// accepted move halves the step.
pub fn optimize_lambda_k_with(
    k: usize,
    n_vertices: usize,
    iterations: usize,
    seed: u64,
    opts: &OptimizerOptions,
) -> Result<OptimizerState> {
    if k < 2 {
        return domain(format!("k must be at least 2, got {k}"));
    }
    if n_vertices < 8 {
        return domain(format!("need at least 8 vertices, got {n_vertices}"));
    }
    if !(opts.initial_step > 0.0 && opts.min_step > 0.0) {
        return domain("steps must be positive");
    }
    let start = ConvexDomain2D::regular_polygon(n_vertices, 1.0)?;
    let mut best = normalise(start.polygon_vertices().expect("regular polygon"))?;
    let mut objective = polygon_objective(&best, k, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = OptimizerState {
        k,
        seed,
        vertices: best.clone(),
        objective,
        iteration: 0,
        history: vec![objective],
        trajectory: vec![best.clone()],
        step: opts.initial_step,
        accepted_moves: 0,
        evaluations: 1,
        warning: None,
    };
    let mut moves: Vec<(usize, usize)> = (0..n_vertices).flat_map(|i| [(i, 0), (i, 1)]).collect();
    while state.iteration < iterations && state.step >= opts.min_step {
        moves.shuffle(&mut rng);
        let mut accepted = 0;
        for &(i, axis) in &moves {
            for sign in [1.0, -1.0] {
                let mut trial = best.clone();
                trial[i][axis] += sign * state.step;
                let candidate = match project(&trial, n_vertices) {
                    Ok(c) => c,
                    Err(Error::Domain(_)) => continue,
                    Err(e) => return Err(e),
                };
                state.evaluations += 1;
                let value = match polygon_objective(&candidate, k, opts) {
                    Ok(v) => v,
                    Err(Error::Domain(_) | Error::Mesh(_)) => continue,
                    Err(e) => return Err(e),
                };
                if value < objective {
                    best = candidate;
                    objective = value;
                    accepted += 1;
                    break;
                }
            }
        }
        state.iteration += 1;
        state.accepted_moves += accepted;
        state.history.push(objective);
        state.trajectory.push(best.clone());
        state.warning = if accepted == 0 {
            state.step *= 0.5;
            Some(format!("no accepted move in sweep {}", state.iteration))
        } else {
            None
        };
    }
    state.vertices = best;
    state.objective = objective;
    Ok(state)
}
