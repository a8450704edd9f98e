//! Separated radial analysis on the cone `C_Σ = Σ × (0, ∞)`.
//!
//! For `u = f(r) v(σ)` with `Δ_Σ v = λ v` the positive cone Laplacian is
//! `(-f'' - (m-1) f'/r + λ f/r²) v`. In `t = log r` this becomes
//! `e^{-2t}(-f_tt - (m-2) f_t + λ f)`, constant-coefficient with
//! characteristic exponents equal to the indicial roots.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::indicial::indicial_roots;
use crate::spectrum::{FemLaplacian, SpectrumTable};
use crate::{Error, Result};

/// Floor of the relative inconsistency of the branch and normalization
/// conditions above which a mode problem is reported unsolvable. The
/// threshold used is `max(SOLVABILITY_TOL, 100 h⁴)`: genuine obstructions
/// are of order one, discretization error of order `h⁴`.
pub const SOLVABILITY_TOL: f64 = 1e-6;

/// `u(σ, r) = r^α v(σ)` on a product grid, with its discrete cone Laplacian.
#[derive(Debug, Clone, Serialize)]
pub struct HarmonicExtension {
    pub m: usize,
    pub alpha: f64,
    pub radii: Vec<f64>,
    /// Radial-major: `values[k * n + i] = radii[k]^α v[i]`.
    pub values: Vec<f64>,
    /// `r^{α-2} (Δ_h v - α(α+m-2) v)` per node, `Δ_h = M^{-1} K`.
    pub residual: Vec<f64>,
    /// `r^{α-2} (λ - α(α+m-2)) v` per node.
    pub predicted: Vec<f64>,
    /// Relative eigen-residual of `v`.
    pub mode_residual: f64,
    /// `max_r |residual - predicted|_M / (r^{α-2} |v|_M)`. The lumped
    /// cotangent Laplacian is consistent in the mass norm but not pointwise
    /// at irregular vertices, hence the choice of norm.
    pub consistency: f64,
    /// Whether `α` solves `α(α+m-2) = λ` to rounding.
    pub alpha_is_indicial: bool,
}

/// Extends a discrete link eigenfunction homogeneously to the cone over a
/// triangulated surface (`m = 3`).
pub fn harmonic_extension(
    fem: &FemLaplacian,
    v: &[f64],
    eigenvalue: f64,
    alpha: f64,
    radii: &[f64],
    mode_tol: f64,
) -> Result<HarmonicExtension> {
    let m = 3usize;
    let n = fem.mass.len();
    if v.len() != n {
        return Err(Error::InvalidInput(format!("field has {} values for {n} vertices", v.len())));
    }
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidInput("radii must be positive and finite".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput("exponent must be finite".into()));
    }
    let mode_residual = fem.mode_residual(v, eigenvalue);
    if !(mode_residual <= mode_tol) {
        return Err(Error::InvalidMode { residual: mode_residual, tol: mode_tol });
    }
    let shift = alpha * (alpha + m as f64 - 2.0);
    let lap_v = fem.apply(v);
    let v_norm = fem.mass_inner(v, v).sqrt().max(f64::MIN_POSITIVE);
    let mut values = Vec::with_capacity(radii.len() * n);
    let mut residual = Vec::with_capacity(radii.len() * n);
    let mut predicted = Vec::with_capacity(radii.len() * n);
    let mut consistency = 0.0f64;
    for &r in radii {
        let ra = r.powf(alpha);
        let rs = r.powf(alpha - 2.0);
        let mut gap = Vec::with_capacity(n);
        for i in 0..n {
            values.push(ra * v[i]);
            let res = rs * (lap_v[i] - shift * v[i]);
            let pred = rs * (eigenvalue - shift) * v[i];
            gap.push(res - pred);
            residual.push(res);
            predicted.push(pred);
        }
        consistency = consistency.max(fem.mass_inner(&gap, &gap).sqrt() / (rs * v_norm));
    }
    let alpha_is_indicial = (shift - eigenvalue).abs() <= 1e-12 * (1.0 + eigenvalue);
    Ok(HarmonicExtension {
        m,
        alpha,
        radii: radii.to_vec(),
        values,
        residual,
        predicted,
        mode_residual,
        consistency,
        alpha_is_indicial,
    })
}

/// Right-hand side `g(r)` of a mode equation.
#[derive(Clone)]
pub enum RadialRhs {
    Zero,
    /// `coeff * r^exponent`.
    Power { coeff: f64, exponent: f64 },
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl RadialRhs {
    fn eval(&self, r: f64) -> f64 {
        match self {
            RadialRhs::Zero => 0.0,
            RadialRhs::Power { coeff, exponent } => coeff * r.powf(*exponent),
            RadialRhs::Function(g) => g(r),
        }
    }
}

impl fmt::Debug for RadialRhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialRhs::Zero => write!(f, "Zero"),
            RadialRhs::Power { coeff, exponent } => write!(f, "Power({coeff} r^{exponent})"),
            RadialRhs::Function(_) => write!(f, "Function"),
        }
    }
}

/// Mode problem `-f'' - (m-1) f'/r + λ f/r² = g` on `(r0, r1)` with Robin
/// conditions `f'(r) = (exponent / r) f(r)` at each end.
///
/// The end exponents usually are indicial roots of `λ`, selecting a growth
/// branch; any real exponent is accepted so that manufactured solutions can
/// be imposed exactly.
#[derive(Debug, Clone)]
pub struct RadialBVP {
    pub m: usize,
    pub eigenvalue: f64,
    pub interval: (f64, f64),
    pub rhs: RadialRhs,
    pub inner_exponent: f64,
    pub outer_exponent: f64,
    /// Prescribed `f(r1)`; a hard constraint when present.
    pub outer_value: Option<f64>,
    /// Grid nodes in `t = log r`, endpoints included.
    pub nodes: usize,
}

impl RadialBVP {
    pub fn validate(&self) -> Result<()> {
        indicial_roots(self.eigenvalue, self.m)?;
        let (r0, r1) = self.interval;
        if !(r0 > 0.0 && r0 < r1 && r1.is_finite()) {
            return Err(Error::InvalidInput(format!("interval ({r0}, {r1}) must satisfy 0 < r0 < r1")));
        }
        if !self.inner_exponent.is_finite() || !self.outer_exponent.is_finite() {
            return Err(Error::InvalidInput("branch exponents must be finite".into()));
        }
        if self.nodes < 8 {
            return Err(Error::InvalidInput(format!("need at least 8 grid nodes, got {}", self.nodes)));
        }
        if let Some(v) = self.outer_value {
            if !v.is_finite() {
                return Err(Error::InvalidInput("normalization value must be finite".into()));
            }
        }
        Ok(())
    }

    /// Whether both end exponents are indicial roots of the mode.
    pub fn branches_are_indicial(&self) -> bool {
        let Ok(p) = indicial_roots(self.eigenvalue, self.m) else { return false };
        let is_root = |b: f64| [p.alpha_minus, p.alpha_plus].iter().any(|a| (a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        is_root(self.inner_exponent) && is_root(self.outer_exponent)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialSolution {
    /// Nodes `t = log r`.
    pub grid: Vec<f64>,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Max interior residual of the discrete equation, relative to
    /// `|q|_∞ + |L_h|_∞ |f|_∞`.
    pub residual_norm: f64,
    /// Relative inconsistency of the branch and normalization conditions.
    pub condition_residual: f64,
    /// `(inner, outer)` Robin exponents.
    pub selected_exponents: (f64, f64),
    /// Homogeneous solutions left undetermined by the end conditions.
    pub free_modes: usize,
}

impl RadialSolution {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.radii.iter().copied().zip(self.values.iter().copied()).collect()
    }
}

/// Finite difference weights for derivatives `0..=order` at `z` on nodes
/// `x` (Fornberg's recursion); `w[d][j]` weights node `j` for derivative `d`.
pub(crate) fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil rows of `-D² - (m-2) D + λ` at each interior node; 4th order,
/// centred where five nodes fit and off-centred on seven nodes otherwise.
fn operator_rows(grid: &[f64], m: usize, lam: f64) -> Vec<(usize, Vec<f64>)> {
    let n = grid.len();
    let b = m as f64 - 2.0;
    (1..n - 1)
        .map(|i| {
            let start = if i < 2 {
                0
            } else if i + 2 > n - 1 {
                n - 7
            } else {
                i - 2
            };
            let len = if (2..=n - 3).contains(&i) { 5 } else { 7 };
            let w = fd_weights(grid[i], &grid[start..start + len], 2);
            let row = (0..len)
                .map(|j| -w[2][j] - b * w[1][j] + if start + j == i { lam } else { 0.0 })
                .collect();
            (start, row)
        })
        .collect()
}

fn end_derivative(grid: &[f64], values: &[f64], at_start: bool) -> f64 {
    let n = grid.len();
    let idx: Vec<usize> = if at_start { (0..7).collect() } else { (n - 7..n).collect() };
    let z = if at_start { grid[0] } else { grid[n - 1] };
    let nodes: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
    let w = fd_weights(z, &nodes, 1);
    idx.iter().zip(&w[1]).map(|(&i, c)| c * values[i]).sum()
}

/// Solves one mode problem. The particular solution comes from a 4th-order
/// finite difference Dirichlet problem; the homogeneous part uses the exact
/// exponentials `e^{α± t}`, so the end conditions reduce to a small linear
/// system whose inconsistency is the mode-wise cokernel obstruction.
pub fn mode_poisson_solve(problem: &RadialBVP, tol: f64) -> Result<RadialSolution> {
    problem.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let m = problem.m;
    let lam = problem.eigenvalue;
    let n = problem.nodes;
    let (t0, t1) = (problem.interval.0.ln(), problem.interval.1.ln());
    let h = (t1 - t0) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| if i == n - 1 { t1 } else { t0 + i as f64 * h }).collect();
    let q: Vec<f64> = grid.iter().map(|&t| (2.0 * t).exp() * problem.rhs.eval(t.exp())).collect();
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("right-hand side is not finite on the interval".into()));
    }

    let rows = operator_rows(&grid, m, lam);
    let inner = n - 2;
    let mut a = DMatrix::<f64>::zeros(inner, inner);
    for (r, (start, w)) in rows.iter().enumerate() {
        for (j, c) in w.iter().enumerate() {
            let col = start + j;
            if col >= 1 && col <= n - 2 {
                a[(r, col - 1)] += c;
            }
        }
    }
    let rhs = DVector::from_iterator(inner, q[1..n - 1].iter().copied());
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure { what: "radial Dirichlet system is singular".into(), residual: f64::INFINITY })?;
    let mut p = vec![0.0; n];
    p[1..n - 1].copy_from_slice(sol.as_slice());

    // homogeneous basis scaled to unit maximum on the interval
    let roots = indicial_roots(lam, m)?;
    let exps = [roots.alpha_plus, roots.alpha_minus];
    let basis = |k: usize, t: f64| -> f64 {
        let a = exps[k];
        let anchor = if a >= 0.0 { t1 } else { t0 };
        (a * (t - anchor)).exp()
    };
    let dp0 = end_derivative(&grid, &p, true);
    let dp1 = end_derivative(&grid, &p, false);
    let (b_in, b_out) = (problem.inner_exponent, problem.outer_exponent);
    let robin = DMatrix::from_row_slice(
        2,
        2,
        &[
            (exps[0] - b_in) * basis(0, t0),
            (exps[1] - b_in) * basis(1, t0),
            (exps[0] - b_out) * basis(0, t1),
            (exps[1] - b_out) * basis(1, t1),
        ],
    );
    let target = DVector::from_vec(vec![-dp0, -dp1]);
    let svd = robin.clone().svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max().max(f64::MIN_POSITIVE);
    let free_modes = 2 - svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let coeffs = match problem.outer_value {
        Some(v) => constrained_fit(&robin, &target, [basis(0, t1), basis(1, t1)], v),
        None => svd.solve(&target, cutoff).unwrap_or_else(|_| DVector::zeros(2)),
    };
    let misfit = (&robin * &coeffs - &target).norm();
    let scale = target.norm().max(robin.norm() * coeffs.norm()).max(problem.outer_value.unwrap_or(0.0).abs());
    let condition_residual = if scale > 0.0 { misfit / scale } else { 0.0 };
    if condition_residual > SOLVABILITY_TOL.max(100.0 * h.powi(4)) {
        return Err(Error::Solvability { residual: condition_residual });
    }

    let values: Vec<f64> =
        grid.iter().zip(&p).map(|(&t, pv)| pv + coeffs[0] * basis(0, t) + coeffs[1] * basis(1, t)).collect();

    let mut worst = 0.0f64;
    let mut op_norm = 0.0f64;
    for (r, (start, w)) in rows.iter().enumerate() {
        let applied: f64 = w.iter().enumerate().map(|(j, c)| c * values[start + j]).sum();
        worst = worst.max((applied - q[r + 1]).abs());
        op_norm = op_norm.max(w.iter().map(|c| c.abs()).sum());
    }
    let f_max = values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let q_max = q.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let denom = q_max + op_norm * f_max;
    let residual_norm = if denom > 0.0 { worst / denom } else { 0.0 };
    if residual_norm > tol {
        return Err(Error::NumericalFailure { what: "radial mode solve".into(), residual: residual_norm });
    }
    Ok(RadialSolution {
        radii: grid.iter().map(|t| t.exp()).collect(),
        grid,
        values,
        residual_norm,
        condition_residual,
        selected_exponents: (b_in, b_out),
        free_modes,
    })
}

/// Least squares on the Robin rows subject to `norm_row · c = value`.
fn constrained_fit(robin: &DMatrix<f64>, target: &DVector<f64>, norm_row: [f64; 2], value: f64) -> DVector<f64> {
    let nv = DVector::from_vec(norm_row.to_vec());
    let nn = nv.norm_squared();
    let c0 = &nv * (value / nn);
    let w = DVector::from_vec(vec![-norm_row[1], norm_row[0]]) / nn.sqrt();
    let rw = robin * &w;
    let denom = rw.norm_squared();
    if denom <= 1e-24 * robin.norm_squared().max(f64::MIN_POSITIVE) {
        // the Robin rows do not see the free direction
        return c0;
    }
    let z = rw.dot(&(target - robin * &c0)) / denom;
    c0 + w * z
}

/// Solves independent mode problems in parallel.
pub fn solve_modes(problems: &[RadialBVP], tol: f64) -> Vec<Result<RadialSolution>> {
    problems.par_iter().map(|p| mode_poisson_solve(p, tol)).collect()
}

/// Dimension of bounded harmonic functions on an asymptotically conical end:
/// the number of connected components of the link.
pub fn bounded_harmonic_dim(spectrum: &SpectrumTable) -> usize {
    spectrum.zero_multiplicity()
}
