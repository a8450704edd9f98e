//! Compressed sparse row matrices and a profile (envelope) Cholesky
//! factorisation under reverse Cuthill-McKee ordering.

use std::collections::{BTreeMap, VecDeque};

use crate::{Error, Result};

/// Square sparse matrix in CSR layout with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Assembles from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in triplets {
            *rows[i].entry(j).or_insert(0.0) += v;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y);
        y
    }

    /// `D_l A D_r` for diagonal scalings given as vectors.
    pub fn scale(&self, left: &[f64], right: &[f64]) -> CsrMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.vals[k] *= left[i] * right[self.cols[k]];
            }
        }
        out
    }

    /// `A + s * diag(d)`.
    pub fn add_diagonal(&self, s: f64, d: &[f64]) -> CsrMatrix {
        let triplets = (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .chain((0..self.n).map(|i| (i, i, s * d[i])));
        CsrMatrix::from_triplets(self.n, triplets.collect::<Vec<_>>())
    }

    /// Max absolute row sum, an upper bound for the spectral norm of a
    /// symmetric matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| (v - self.get(j, i)).abs() <= tol * (1.0 + v.abs())))
    }

    /// Reverse Cuthill-McKee permutation; `perm[new] = old`.
    pub fn rcm_ordering(&self) -> Vec<usize> {
        let n = self.n;
        let degree: Vec<usize> = (0..n).map(|i| self.row(i).filter(|&(j, _)| j != i).count()).collect();
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            // Start each component from a minimum-degree vertex, then move to
            // a pseudo-peripheral vertex by repeated BFS.
            let mut start = (0..n)
                .filter(|&i| !visited[i])
                .min_by_key(|&i| degree[i])
                .expect("unvisited vertex exists");
            let mut ecc = 0;
            for _ in 0..8 {
                let levels = self.bfs_levels(start, &visited);
                let depth = *levels.iter().flatten().max().unwrap_or(&0);
                if depth <= ecc && ecc > 0 {
                    break;
                }
                ecc = depth;
                start = (0..n)
                    .filter(|&i| levels[i] == Some(depth))
                    .min_by_key(|&i| degree[i])
                    .unwrap_or(start);
            }
            let mut queue = VecDeque::from([start]);
            visited[start] = true;
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut nbrs: Vec<usize> = self.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
                nbrs.sort_by_key(|&j| (degree[j], j));
                for j in nbrs {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }

    fn bfs_levels(&self, start: usize, blocked: &[bool]) -> Vec<Option<usize>> {
        let mut level = vec![None; self.n];
        level[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].unwrap();
            for (j, _) in self.row(v) {
                if !blocked[j] && level[j].is_none() {
                    level[j] = Some(lv + 1);
                    queue.push_back(j);
                }
            }
        }
        level
    }
}

/// Cholesky factor `P A P^T = L L^T` stored by rows over the envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors a symmetric positive definite matrix.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n();
        let perm = a.rcm_ordering();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(perm[i]).map(|(j, _)| inv[j]).min().unwrap_or(i).min(i))
            .collect();
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for i in 0..n {
            offset.push(offset[i] + (i - first[i] + 1));
        }
        let mut data = vec![0.0; offset[n]];
        for i in 0..n {
            for (j, v) in a.row(perm[i]) {
                let jn = inv[j];
                if jn <= i {
                    data[offset[i] + jn - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let row_i = &data[offset[i] + k0 - fi..offset[i] + j - fi];
                let row_j = &data[offset[j] + k0 - fj..offset[j] + j - fj];
                let s: f64 = row_i.iter().zip(row_j).map(|(x, y)| x * y).sum();
                let idx = offset[i] + j - fi;
                if j < i {
                    let ljj = data[offset[j + 1] - 1];
                    data[idx] = (data[idx] - s) / ljj;
                } else {
                    let d = data[idx] - s;
                    if !(d > 0.0) {
                        return Err(Error::NumericalFailure {
                            what: "Cholesky factorisation (matrix not positive definite)".into(),
                            residual: d,
                        });
                    }
                    data[idx] = d.sqrt();
                }
            }
        }
        Ok(EnvelopeCholesky { perm, first, offset, data })
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.offset[i]..self.offset[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.offset[i]..self.offset[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (l, v) in row[..i - fi].iter().zip(&mut y[fi..i]) {
                *v -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
