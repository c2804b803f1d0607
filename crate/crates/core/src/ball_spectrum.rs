//! Dirichlet spectrum of the unit ball `B_m ⊂ R^m`.
//!
//! Eigenvalues are `j²_{(m−2)/2+l, n}` for harmonic degree `l ≥ 0` and radial
//! index `n ≥ 1`, each repeated `N(m, l)` times, the dimension of the space of
//! degree-`l` spherical harmonics.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::bessel::{nth_zero, BesselZero, Order, DEFAULT_ZERO_TOL};
use crate::error::{domain, Error, Result};

/// Default cap on the number of distinct Bessel zeros computed per request.
pub const DEFAULT_ZERO_BUDGET: usize = 100_000;

/// One distinct eigenvalue level of the ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallLevel {
    pub degree: usize,
    pub radial_index: usize,
    pub eigenvalue: f64,
    /// Certified half-width of the eigenvalue, `2 j · abs_err(j)`.
    pub abs_err: f64,
    pub multiplicity: u128,
}

/// One entry of the spectrum, expanded by multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallEigenvalue {
    pub value: f64,
    pub abs_err: f64,
    pub degree: usize,
    pub radial_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSpectrum {
    pub dimension: usize,
    /// Nondecreasing; ties appear once per multiplicity.
    pub eigenvalues: Vec<BallEigenvalue>,
    /// The distinct levels that contributed, in increasing order.
    pub levels: Vec<BallLevel>,
}

impl BallSpectrum {
    /// `λ_k(B_m)`, 1-based.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i)).map(|e| e.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }
}

/// Dimension `N(m, l)` of degree-`l` spherical harmonics on `S^{m−1}`:
/// `C(l+m−1, m−1) − C(l+m−3, m−1)`, i.e. `(2l+m−2)(l+m−3)!/(l!(m−2)!)`.
///
/// Exact integer arithmetic; overflow of `u128` is reported as a resource
/// error.
pub fn harmonic_multiplicity(m: usize, l: usize) -> Result<u128> {
    if m < 2 {
        return domain(format!("dimension must be at least 2, got {m}"));
    }
    if l == 0 {
        return Ok(1);
    }
    let all = binomial(l + m - 1, m - 1)?;
    let lower = if l >= 2 { binomial(l + m - 3, m - 1)? } else { 0 };
    Ok(all - lower)
}

fn binomial(n: usize, k: usize) -> Result<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        let factor = (n - k + i) as u128;
        c = c
            .checked_mul(factor)
            .ok_or_else(|| Error::Resource(format!("C({n}, {k}) overflows u128")))?
            / i as u128;
    }
    Ok(c)
}

#[derive(PartialEq)]
struct Candidate {
    value: f64,
    degree: usize,
    zero: BesselZero,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.degree.cmp(&self.degree))
            .then_with(|| other.zero.index.cmp(&self.zero.index))
    }
}

/// The first `count` Dirichlet eigenvalues of `B_m`, ties expanded by
/// multiplicity.
pub fn ball_eigenvalues(m: usize, count: usize) -> Result<BallSpectrum> {
    ball_eigenvalues_with(m, count, DEFAULT_ZERO_TOL, DEFAULT_ZERO_BUDGET)
}

/// [`ball_eigenvalues`] with explicit zero tolerance and zero budget.
///
/// `j_{ν,n}` increases in both `ν` and `n`, so the `(l, n)` grid is a Young
/// tableau: the next smallest level is always `(l, 1)` following the largest
/// degree seen so far, or `(l, n+1)` following an accepted `(l, n)`. A heap
/// over that frontier emits levels in increasing order without skipping any.
pub fn ball_eigenvalues_with(m: usize, count: usize, tol: f64, zero_budget: usize) -> Result<BallSpectrum> {
    if m < 2 {
        return domain(format!("dimension must be at least 2, got {m}"));
    }
    if count == 0 {
        return domain("count must be at least 1");
    }
    let mut computed = 0usize;
    let mut zero = |degree: usize, n: usize| -> Result<Candidate> {
        computed += 1;
        if computed > zero_budget {
            return Err(Error::Resource(format!(
                "ball spectrum frontier exceeded {zero_budget} Bessel zeros"
            )));
        }
        let z = nth_zero(Order::for_ball(m, degree)?, n, tol)?;
        Ok(Candidate { value: z.value * z.value, degree, zero: z })
    };

    let mut heap = BinaryHeap::new();
    heap.push(zero(0, 1)?);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut levels = Vec::new();
    while eigenvalues.len() < count {
        let c = heap.pop().expect("frontier is never empty");
        let mult = harmonic_multiplicity(m, c.degree)?;
        let abs_err = 2.0 * c.zero.value * c.zero.abs_err;
        levels.push(BallLevel {
            degree: c.degree,
            radial_index: c.zero.index,
            eigenvalue: c.value,
            abs_err,
            multiplicity: mult,
        });
        let take = (count - eigenvalues.len()).min(usize::try_from(mult).unwrap_or(usize::MAX));
        eigenvalues.extend(std::iter::repeat_n(
            BallEigenvalue { value: c.value, abs_err, degree: c.degree, radial_index: c.zero.index },
            take,
        ));
        if eigenvalues.len() >= count {
            break;
        }
        heap.push(zero(c.degree, c.zero.index + 1)?);
        if c.zero.index == 1 {
            heap.push(zero(c.degree + 1, 1)?);
        }
    }
    Ok(BallSpectrum { dimension: m, eigenvalues, levels })
}

/// `λ₁(B_m) = j²_{(m−2)/2}` as a zero, for callers that only need the ground state.
pub fn ground_zero(m: usize, tol: f64) -> Result<BesselZero> {
    nth_zero(Order::for_ball(m, 0)?, 1, tol)
}

/// `λ₂(B_m) = … = λ_{m+1}(B_m) = j²_{m/2}` as a zero.
pub fn second_zero(m: usize, tol: f64) -> Result<BesselZero> {
    nth_zero(Order::for_ball(m, 1)?, 1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Dimension of degree-l harmonic polynomials in m variables, by rank of
    /// the Laplacian from degree-l to degree-(l−2) monomials (it is onto, so
    /// the kernel has dimension #monomials(l) − #monomials(l−2)); the rank is
    /// computed by Gaussian elimination on the explicit matrix.
    fn brute_force_harmonic_dim(m: usize, l: usize) -> usize {
        fn monomials(m: usize, deg: usize) -> Vec<Vec<usize>> {
            if m == 1 {
                return vec![vec![deg]];
            }
            let mut out = Vec::new();
            for a in 0..=deg {
                for mut rest in monomials(m - 1, deg - a) {
                    rest.insert(0, a);
                    out.push(rest);
                }
            }
            out
        }
        let src = monomials(m, l);
        if l < 2 {
            return src.len();
        }
        let dst = monomials(m, l - 2);
        let index = |e: &Vec<usize>| dst.iter().position(|d| d == e).unwrap();
        let mut mat = vec![vec![0.0f64; src.len()]; dst.len()];
        for (j, e) in src.iter().enumerate() {
            for i in 0..m {
                if e[i] >= 2 {
                    let mut t = e.clone();
                    t[i] -= 2;
                    mat[index(&t)][j] += (e[i] * (e[i] - 1)) as f64;
                }
            }
        }
        let mut rank = 0;
        let cols = src.len();
        for col in 0..cols {
            let pivot = (rank..mat.len()).find(|&r| mat[r][col].abs() > 1e-9);
            if let Some(p) = pivot {
                mat.swap(rank, p);
                let pv = mat[rank][col];
                for r in 0..mat.len() {
                    if r != rank {
                        let f = mat[r][col] / pv;
                        if f != 0.0 {
                            for c in 0..cols {
                                mat[r][c] -= f * mat[rank][c];
                            }
                        }
                    }
                }
                rank += 1;
            }
        }
        src.len() - rank
    }

    #[test]
    fn multiplicities() {
        assert_eq!(harmonic_multiplicity(3, 2).unwrap(), 5);
        assert_eq!(harmonic_multiplicity(2, 5).unwrap(), 2);
        assert_eq!(harmonic_multiplicity(7, 0).unwrap(), 1);
        assert_eq!(harmonic_multiplicity(7, 1).unwrap(), 7);
        assert_eq!(brute_force_harmonic_dim(6, 3), 50);
        assert_eq!(harmonic_multiplicity(6, 3).unwrap(), 50);
        for m in 2..=5 {
            for l in 0..=5 {
                assert_eq!(harmonic_multiplicity(m, l).unwrap(), brute_force_harmonic_dim(m, l) as u128, "m={m} l={l}");
            }
        }
        assert!(harmonic_multiplicity(600, 12).is_ok());
    }

    #[test]
    fn small_examples() {
        let s = ball_eigenvalues(3, 2).unwrap();
        assert!((s.lambda(1).unwrap() - PI * PI).abs() < 1e-8);
        assert!((s.lambda(2).unwrap() - 4.493_409_457_909_064f64.powi(2)).abs() < 1e-8);

        let s = ball_eigenvalues(2, 1).unwrap();
        assert!((s.lambda(1).unwrap() - 5.783_185_962_946_784).abs() < 1e-8);

        let s = ball_eigenvalues(4, 5).unwrap();
        let j1 = 3.831_705_970_207_512f64;
        let j2 = 5.135_622_301_840_683f64;
        assert!((s.lambda(1).unwrap() - j1 * j1).abs() < 1e-8);
        for k in 2..=5 {
            assert!((s.lambda(k).unwrap() - j2 * j2).abs() < 1e-8);
        }
    }

    #[test]
    fn degeneracy_positions_two_to_m_plus_one() {
        for m in 2..=30 {
            let s = ball_eigenvalues(m, m + 2).unwrap();
            let j = second_zero(m, 1e-12).unwrap().value;
            for k in 2..=m + 1 {
                let v = s.lambda(k).unwrap();
                assert!((v - j * j).abs() <= 1e-9 * v, "m={m} k={k}");
            }
            assert!(s.lambda(m + 2).unwrap() > j * j * (1.0 + 1e-9));
        }
    }

    #[test]
    fn weyl_growth_in_the_plane() {
        let s = ball_eigenvalues(2, 200).unwrap();
        let ratio = s.lambda(200).unwrap() / (4.0 * 200.0);
        assert!((ratio - 1.0).abs() < 0.15, "ratio {ratio}");
        assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn doubled_frontier_changes_nothing() {
        for (m, count) in [(2usize, 60usize), (3, 40), (5, 30)] {
            let s = ball_eigenvalues(m, count).unwrap();
            let max_l = s.levels.iter().map(|l| l.degree).max().unwrap();
            let max_n = s.levels.iter().map(|l| l.radial_index).max().unwrap();
            let mut all = Vec::new();
            for l in 0..=2 * max_l + 1 {
                for n in 1..=2 * max_n + 1 {
                    let j = nth_zero(Order::for_ball(m, l).unwrap(), n, DEFAULT_ZERO_TOL).unwrap().value;
                    for _ in 0..harmonic_multiplicity(m, l).unwrap() {
                        all.push(j * j);
                    }
                }
            }
            all.sort_by(f64::total_cmp);
            for (a, b) in s.values().iter().zip(&all) {
                assert!((a - b).abs() < 1e-8, "m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(ball_eigenvalues_with(2, 500, 1e-10, 10), Err(Error::Resource(_))));
    }
}
