//! Compressed sparse rows, reverse Cuthill–McKee ordering and an envelope
//! (skyline) Cholesky factorisation for symmetric positive definite systems.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Square sparse matrix in CSR form with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Sum duplicate `(row, col, value)` entries into a CSR matrix.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| (v - self.get(j, i)).abs() <= tol * v.abs().max(1.0)))
    }
}

/// Reverse Cuthill–McKee ordering of the matrix graph. `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n).map(|i| a.row_ptr[i + 1] - a.row_ptr[i]).collect();
    let neighbours = |i: usize| a.col_idx[a.row_ptr[i]..a.row_ptr[i + 1]].iter().copied().filter(move |&j| j != i);
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)).expect("unvisited vertex exists");
        let start = pseudo_peripheral(seed, &degree, &neighbours, n);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = neighbours(v).filter(|&j| !visited[j]).collect();
            next.sort_unstable_by_key(|&j| (degree[j], j));
            for j in next {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// Repeated breadth-first search from the farthest, lowest-degree vertex of
/// the last level until the eccentricity stops growing.
fn pseudo_peripheral<I: Iterator<Item = usize>>(
    seed: usize,
    degree: &[usize],
    neighbours: &impl Fn(usize) -> I,
    n: usize,
) -> usize {
    let levels = |s: usize| {
        let mut depth = vec![usize::MAX; n];
        depth[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut last = vec![s];
        let mut ecc = 0;
        while let Some(v) = queue.pop_front() {
            for j in neighbours(v) {
                if depth[j] == usize::MAX {
                    depth[j] = depth[v] + 1;
                    if depth[j] > ecc {
                        ecc = depth[j];
                        last.clear();
                    }
                    if depth[j] == ecc {
                        last.push(j);
                    }
                    queue.push_back(j);
                }
            }
        }
        (ecc, last)
    };
    let mut best = seed;
    let (mut ecc, mut last) = levels(seed);
    loop {
        let cand = *last.iter().min_by_key(|&&j| (degree[j], j)).expect("level is nonempty");
        let (e, l) = levels(cand);
        if e <= ecc {
            return best;
        }
        best = cand;
        ecc = e;
        last = l;
    }
}

/// Cholesky factor `L` of `P A Pᵀ`, stored row by row from each row's first
/// nonzero column to the diagonal.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    n: usize,
    perm: Vec<usize>,
    inv: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factor a symmetric positive definite matrix after RCM reordering.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        Self::factor_with(a, reverse_cuthill_mckee(a))
    }

    pub fn factor_with(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.n;
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first = vec![0usize; n];
        for (i, &old) in perm.iter().enumerate() {
            first[i] = a.row(old).map(|(j, _)| inv[j]).filter(|&j| j <= i).min().unwrap_or(i);
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let size = start[n];
        if size > 400_000_000 {
            return Err(Error::Resource(format!("envelope of {size} entries is too large")));
        }
        let mut data = vec![0.0; size];
        for (i, &old) in perm.iter().enumerate() {
            for (j, v) in a.row(old) {
                let jj = inv[j];
                if jj <= i {
                    data[start[i] + jj - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = data.split_at_mut(start[i]);
            let row_i = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let row_j = &done[start[j]..start[j + 1]];
                let dot = dot(&row_i[k0 - fi..j - fi], &row_j[k0 - fj..j - fj]);
                row_i[j - fi] = (row_i[j - fi] - dot) / row_j[j - fj];
            }
            let d = row_i[i - fi] - dot(&row_i[..i - fi], &row_i[..i - fi]);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Singularity(format!("non-positive pivot {d:e} at row {i} of {n}")));
            }
            row_i[i - fi] = d.sqrt();
        }
        Ok(Self { n, perm, inv, first, start, data })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] = (y[i] - dot(&row[..i - fi], &y[fi..i])) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let xi = y[i] / row[i - fi];
            y[i] = xi;
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        (0..n).map(|old| y[self.inv[old]]).collect()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            acc[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    /// Random sparse SPD matrix: a random graph Laplacian plus identity.
    fn random_spd(n: usize, seed: u64) -> CsrMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 1.0));
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                if j != i {
                    let w: f64 = rng.gen_range(0.1..1.0);
                    t.extend([(i, i, w), (j, j, w), (i, j, -w), (j, i, -w)]);
                }
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn triplets_are_summed() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 0, 2.0), (0, 0, 3.0)]);
        assert_eq!(a.get(0, 0), 4.0);
        assert_eq!(a.get(1, 0), 2.0);
        assert_eq!(a.get(0, 1), 0.0);
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn rcm_is_a_permutation_and_narrows_a_shuffled_band() {
        let n = 200;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut shuffle: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            shuffle.swap(i, rng.gen_range(0..=i));
        }
        let base = laplacian_1d(n);
        let mut t = Vec::new();
        for i in 0..n {
            for (j, v) in base.row(i) {
                t.push((shuffle[i], shuffle[j], v));
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let p = reverse_cuthill_mckee(&a);
        let mut seen = p.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let f = EnvelopeCholesky::factor(&a).unwrap();
        assert_eq!(f.envelope_size(), 2 * n - 1);
    }

    #[test]
    fn solves_match_dense_reference() {
        for seed in 0..5 {
            let n = 60;
            let a = random_spd(n, seed);
            assert!(a.is_symmetric(0.0));
            let f = EnvelopeCholesky::factor(&a).unwrap();
            let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
            let b = a.mul_vec(&x_true);
            let x = f.solve(&b);
            // dense oracle
            let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| a.get(i, j));
            let xd = dense.cholesky().unwrap().solve(&nalgebra::DVector::from_vec(b.clone()));
            for i in 0..n {
                assert!((x[i] - x_true[i]).abs() < 1e-10);
                assert!((x[i] - xd[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn indefinite_is_singular() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(EnvelopeCholesky::factor(&a), Err(Error::Singularity(_))));
    }
}
