//! Smallest eigenpairs of `K v = λ M v` with `K` sparse symmetric positive
//! semi-definite and `M` diagonal positive.
//!
//! The problem is reduced to the ordinary symmetric matrix
//! `A = M^{-1/2} K M^{-1/2}` and solved by shift-invert block subspace
//! iteration with Rayleigh–Ritz projection on `A`. Blocks are wider than the
//! requested count so that exactly degenerate eigenspaces (symmetric meshes)
//! are captured in full.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::sparse::{CsrMatrix, EnvelopeCholesky};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Number of smallest eigenpairs wanted.
    pub count: usize,
    /// Convergence threshold on `|A x - θ x| / |A|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed of the starting block; results are deterministic per seed.
    pub seed: u64,
}

impl EigenOptions {
    pub fn new(count: usize, tol: f64) -> Self {
        EigenOptions { count, tol, max_iter: 500, seed: 0x5eed }
    }
}

/// Converged eigenpairs in ascending order. Vectors are `M`-orthonormal.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Upper bound on `|A|` used to scale the residuals.
    pub norm_estimate: f64,
}

pub fn smallest_generalized(stiffness: &CsrMatrix, mass: &[f64], opts: &EigenOptions) -> Result<EigenPairs> {
    let n = stiffness.n();
    if mass.len() != n {
        return Err(Error::InvalidInput("mass vector length does not match matrix size".into()));
    }
    if mass.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidInput("mass matrix must be positive".into()));
    }
    if opts.count == 0 || opts.count > n {
        return Err(Error::InvalidInput(format!("cannot compute {} eigenpairs of a {n}x{n} problem", opts.count)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("eigensolver tolerance must be positive".into()));
    }
    let inv_sqrt: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let sqrt_m: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let a = stiffness.scale(&inv_sqrt, &inv_sqrt);
    let norm_a = a.norm_inf().max(f64::MIN_POSITIVE);

    // K + sM is positive definite for s > 0 since K is semi-definite.
    let mean_diag = (0..n).map(|i| a.get(i, i)).sum::<f64>() / n as f64;
    let shift = 1e-3 * mean_diag.max(f64::MIN_POSITIVE);
    let chol = EnvelopeCholesky::factor(&stiffness.add_diagonal(shift, mass))?;
    let apply_inverse = |x: &[f64]| -> Vec<f64> {
        let b: Vec<f64> = x.iter().zip(&sqrt_m).map(|(v, s)| v * s).collect();
        let y = chol.solve(&b);
        y.iter().zip(&sqrt_m).map(|(v, s)| v * s).collect()
    };

    let block = (opts.count + opts.count.max(8)).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::from_fn(n, block, |_, _| rng.random_range(-1.0..1.0));
    x = orthonormalize(x);

    let mut last_res = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let cols: Vec<Vec<f64>> = (0..block)
            .into_par_iter()
            .map(|j| apply_inverse(x.column(j).as_slice()))
            .collect();
        let y = orthonormalize(DMatrix::from_fn(n, block, |i, j| cols[j][i]));
        let ay = apply_columns(&a, &y);
        let h = y.transpose() * &ay;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let v = DMatrix::from_fn(block, block, |i, j| eig.eigenvectors[(i, order[j])]);
        let theta: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        x = &y * &v;
        let ax = &ay * &v;
        let residuals: Vec<f64> = (0..opts.count)
            .map(|j| (ax.column(j) - x.column(j) * theta[j]).norm() / norm_a)
            .collect();
        last_res = residuals.iter().copied().fold(0.0, f64::max);
        if last_res <= opts.tol {
            let vectors = (0..opts.count)
                .map(|j| x.column(j).iter().zip(&inv_sqrt).map(|(v, s)| v * s).collect())
                .collect();
            return Ok(EigenPairs {
                values: theta[..opts.count].to_vec(),
                vectors,
                residuals,
                iterations: iter,
                norm_estimate: norm_a,
            });
        }
    }
    Err(Error::NumericalFailure {
        what: format!("shift-invert subspace iteration ({} iterations)", opts.max_iter),
        residual: last_res,
    })
}

fn apply_columns(a: &CsrMatrix, x: &DMatrix<f64>) -> DMatrix<f64> {
    let cols: Vec<Vec<f64>> = (0..x.ncols())
        .into_par_iter()
        .map(|j| a.mul(x.column(j).as_slice()))
        .collect();
    DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| cols[j][i])
}

fn orthonormalize(x: DMatrix<f64>) -> DMatrix<f64> {
    let q = x.qr().q();
    // a second pass restores orthogonality lost to cancellation
    q.qr().q()
}

/// Dense reference solver for small problems: all eigenvalues of
/// `M^{-1/2} K M^{-1/2}` in ascending order.
pub fn dense_generalized_eigenvalues(stiffness: &CsrMatrix, mass: &[f64]) -> Vec<f64> {
    let n = stiffness.n();
    let a = DMatrix::from_fn(n, n, |i, j| stiffness.get(i, j) / (mass[i] * mass[j]).sqrt());
    let mut vals: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Rayleigh quotient `vᵀKv / vᵀMv`.
pub fn rayleigh_quotient(stiffness: &CsrMatrix, mass: &[f64], v: &[f64]) -> f64 {
    let kv = stiffness.mul(v);
    let num: f64 = v.iter().zip(&kv).map(|(a, b)| a * b).sum();
    let den: f64 = v.iter().zip(mass).map(|(a, m)| a * a * m).sum();
    num / den
}
