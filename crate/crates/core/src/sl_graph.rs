//! Special Lagrangian graphs over the flat model `R^m ⊂ C^m`.
//!
//! The graph of `dA` is `{x + i∇A(x)}`; it is Lagrangian automatically and
//! special Lagrangian iff `F = Im det(I + i Hess A)` vanishes. The linear part
//! of `F` in `A` is `tr Hess A`.
//!
//! Also: recovery of a radial potential for a closed 1-form on a cone annulus,
//! `η = π^*γ + dA` with `A(σ, r) = ∫_0^r η_r(σ, s) ds`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mesh::TriMesh;
use crate::{Error, Result};

/// Scalar samples on a uniform axis-aligned grid in `R^m`, row-major with the
/// last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScalarField {
    pub lo: Vec<f64>,
    pub shape: Vec<usize>,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl GridScalarField {
    pub fn new(lo: Vec<f64>, shape: Vec<usize>, spacing: f64, values: Vec<f64>) -> Result<Self> {
        let f = GridScalarField { lo, shape, spacing, values };
        f.validate()?;
        Ok(f)
    }

    pub fn sample(lo: Vec<f64>, shape: Vec<usize>, spacing: f64, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let len: usize = shape.iter().product();
        let probe = GridScalarField { lo, shape, spacing, values: Vec::new() };
        let values = (0..len).into_par_iter().map(|idx| f(&probe.point(idx))).collect();
        Self::new(probe.lo, probe.shape, probe.spacing, values)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.shape.len();
        if m < 3 {
            return Err(Error::InvalidDimension(format!("flat model needs m >= 3, got {m}")));
        }
        if self.lo.len() != m {
            return Err(Error::InvalidInput("box corner and shape have different dimensions".into()));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::InvalidInput("grid spacing must be positive".into()));
        }
        if self.shape.iter().any(|&n| n < 3) {
            return Err(Error::InvalidInput("every axis needs at least 3 nodes".into()));
        }
        if self.values.len() != self.shape.iter().product::<usize>() {
            return Err(Error::InvalidInput("value count does not match the grid shape".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for d in (0..self.dim() - 1).rev() {
            s[d] = s[d + 1] * self.shape[d + 1];
        }
        s
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            out[d] = idx % self.shape[d];
            idx /= self.shape[d];
        }
        out
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().zip(&self.lo).map(|(&i, lo)| lo + i as f64 * self.spacing).collect()
    }

    /// Flat indices of nodes whose full central stencil exists.
    fn interior(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&idx| self.multi_index(idx).iter().zip(&self.shape).all(|(&i, &n)| i >= 1 && i + 1 < n))
            .collect()
    }

    /// Shape of the interior sub-grid.
    fn interior_grid(&self, values: Vec<f64>) -> GridScalarField {
        GridScalarField {
            lo: self.lo.iter().map(|l| l + self.spacing).collect(),
            shape: self.shape.iter().map(|n| n - 2).collect(),
            spacing: self.spacing,
            values,
        }
    }

    /// Central-difference Hessian at an interior node, row-major `m x m`.
    fn hessian(&self, idx: usize, strides: &[usize]) -> Vec<f64> {
        let m = self.dim();
        let h2 = self.spacing * self.spacing;
        let a = |k: isize| self.values[(idx as isize + k) as usize];
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            let si = strides[i] as isize;
            out[i * m + i] = (a(si) - 2.0 * a(0) + a(-si)) / h2;
            for j in i + 1..m {
                let sj = strides[j] as isize;
                let v = (a(si + sj) - a(si - sj) - a(-si + sj) + a(-si - sj)) / (4.0 * h2);
                out[i * m + j] = v;
                out[j * m + i] = v;
            }
        }
        out
    }

    pub fn scaled(&self, t: f64) -> GridScalarField {
        GridScalarField { values: self.values.iter().map(|v| t * v).collect(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// `Im det(I + iH)` for a symmetric `m x m` matrix, by complex LU with
/// partial pivoting.
pub fn im_det_i_plus_ih(h: &[f64], m: usize) -> f64 {
    let mut a: Vec<Complex64> =
        (0..m * m).map(|k| Complex64::new(if k / m == k % m { 1.0 } else { 0.0 }, h[k])).collect();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| a[x * m + c].norm().total_cmp(&a[y * m + c].norm())).unwrap();
        if p != c {
            for k in 0..m {
                a.swap(c * m + k, p * m + k);
            }
            det = -det;
        }
        let piv = a[c * m + c];
        det *= piv;
        if piv.norm() == 0.0 {
            return 0.0;
        }
        for r in c + 1..m {
            let f = a[r * m + c] / piv;
            for k in c..m {
                let v = a[c * m + k];
                a[r * m + k] -= f * v;
            }
        }
    }
    det.im
}

/// Direct expansion for `m = 3`: `tr H - det H`.
pub fn im_det_m3(h: &[f64]) -> f64 {
    let tr = h[0] + h[4] + h[8];
    let det = h[0] * (h[4] * h[8] - h[5] * h[7]) - h[1] * (h[3] * h[8] - h[5] * h[6]) + h[2] * (h[3] * h[7] - h[4] * h[6]);
    tr - det
}

/// Defect `F = Im det(I + i Hess A)` on the interior nodes.
pub fn graph_defect(a: &GridScalarField) -> Result<GridScalarField> {
    a.validate()?;
    let m = a.dim();
    let strides = a.strides();
    let nodes = a.interior();
    let values: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&idx| {
            let h = a.hessian(idx, &strides);
            let f = im_det_i_plus_ih(&h, m);
            if m == 3 {
                let direct = im_det_m3(&h);
                let gap = (f - direct).abs();
                if gap > 1e-10 * (1.0 + direct.abs()) {
                    return Err(Error::NumericalFailure { what: "complex determinant cross-check".into(), residual: gap });
                }
            }
            Ok(f)
        })
        .collect();
    Ok(a.interior_grid(values.into_iter().collect::<Result<_>>()?))
}

/// Discrete Laplacian `tr Hess A` on the interior nodes.
pub fn hessian_trace(a: &GridScalarField) -> Result<GridScalarField> {
    a.validate()?;
    let m = a.dim();
    let strides = a.strides();
    let values = a
        .interior()
        .par_iter()
        .map(|&idx| {
            let h = a.hessian(idx, &strides);
            (0..m).map(|i| h[i * m + i]).sum()
        })
        .collect();
    Ok(a.interior_grid(values))
}

/// A 1-form on the grid, one component array per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOneForm {
    pub lo: Vec<f64>,
    pub shape: Vec<usize>,
    pub spacing: f64,
    pub components: Vec<Vec<f64>>,
}

impl GridOneForm {
    fn component_field(&self, d: usize) -> GridScalarField {
        GridScalarField {
            lo: self.lo.clone(),
            shape: self.shape.clone(),
            spacing: self.spacing,
            values: self.components[d].clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.len() != self.shape.len() {
            return Err(Error::InvalidInput("one component per axis is required".into()));
        }
        (0..self.components.len()).try_for_each(|d| self.component_field(d).validate())
    }
}

/// `dA` with central differences inside and second-order one-sided stencils
/// on the faces.
pub fn gradient(a: &GridScalarField) -> Result<GridOneForm> {
    a.validate()?;
    let strides = a.strides();
    let h = a.spacing;
    let components = (0..a.dim())
        .map(|d| {
            let s = strides[d] as isize;
            (0..a.len())
                .map(|idx| {
                    let i = a.multi_index(idx)[d];
                    let v = |k: isize| a.values[(idx as isize + k * s) as usize];
                    if i == 0 {
                        (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h)
                    } else if i + 1 == a.shape[d] {
                        (3.0 * v(0) - 4.0 * v(-1) + v(-2)) / (2.0 * h)
                    } else {
                        (v(1) - v(-1)) / (2.0 * h)
                    }
                })
                .collect()
        })
        .collect();
    Ok(GridOneForm { lo: a.lo.clone(), shape: a.shape.clone(), spacing: h, components })
}

/// `max |∂_i η_j - ∂_j η_i|` over interior nodes (central differences).
pub fn lagrangian_residual(eta: &GridOneForm) -> Result<f64> {
    eta.validate()?;
    let probe = eta.component_field(0);
    let strides = probe.strides();
    let h = eta.spacing;
    let m = eta.shape.len();
    let worst = probe
        .interior()
        .par_iter()
        .map(|&idx| {
            let mut w = 0.0f64;
            for i in 0..m {
                for j in i + 1..m {
                    let d = |comp: usize, axis: usize| {
                        let s = strides[axis];
                        (eta.components[comp][idx + s] - eta.components[comp][idx - s]) / (2.0 * h)
                    };
                    w = w.max((d(j, i) - d(i, j)).abs());
                }
            }
            w
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizationRow {
    pub t: f64,
    /// `max |F(tA) - t tr Hess A|`.
    pub remainder: f64,
    pub ratio_t2: f64,
    pub ratio_t3: f64,
}

/// Remainder of the linearization `F(tA) ≈ t tr Hess A` for each `t`.
pub fn linearization_check(a: &GridScalarField, t_values: &[f64]) -> Result<Vec<LinearizationRow>> {
    let lin = hessian_trace(a)?;
    t_values
        .iter()
        .map(|&t| {
            if !(t != 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput(format!("scaling t = {t} must be finite and nonzero")));
            }
            let f = graph_defect(&a.scaled(t))?;
            let remainder = f.values.iter().zip(&lin.values).map(|(x, l)| (x - t * l).abs()).fold(0.0, f64::max);
            Ok(LinearizationRow { t, remainder, ratio_t2: remainder / (t * t), ratio_t3: remainder / (t * t * t).abs() })
        })
        .collect()
}

/// Closed 1-form on a cone annulus over a link mesh: angular part as edge
/// integrals `∫_{i→j} η` (edges `i < j`) per shell, radial part `η(∂_r)` per
/// vertex per shell. Both are radial-major.
#[derive(Debug, Clone)]
pub struct OneFormSamples {
    pub mesh: TriMesh,
    pub edges: Vec<(usize, usize)>,
    pub radii: Vec<f64>,
    pub angular: Vec<f64>,
    pub radial: Vec<f64>,
}

impl OneFormSamples {
    pub fn new(mesh: TriMesh, radii: Vec<f64>, angular: Vec<f64>, radial: Vec<f64>) -> Result<Self> {
        let edges = mesh.edges();
        let s = OneFormSamples { mesh, edges, radii, angular, radial };
        s.validate()?;
        Ok(s)
    }

    /// Samples `angular(shell radius, i, j)` and `radial(r, vertex)`.
    pub fn sample(
        mesh: TriMesh,
        radii: Vec<f64>,
        angular: impl Fn(f64, usize, usize) -> f64,
        radial: impl Fn(f64, usize) -> f64,
    ) -> Result<Self> {
        let edges = mesh.edges();
        let n = mesh.num_vertices();
        let ang = radii.iter().flat_map(|&r| edges.iter().map(move |&(i, j)| (r, i, j))).map(|(r, i, j)| angular(r, i, j)).collect();
        let rad = radii.iter().flat_map(|&r| (0..n).map(move |v| (r, v))).map(|(r, v)| radial(r, v)).collect();
        Self::new(mesh, radii, ang, rad)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.radii.len();
        if k < 4 {
            return Err(Error::InvalidInput("radial integration needs at least 4 shells".into()));
        }
        if self.radii[0] <= 0.0 || self.radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("radii must be positive and strictly increasing".into()));
        }
        if self.angular.len() != k * self.edges.len() || self.radial.len() != k * self.mesh.num_vertices() {
            return Err(Error::InvalidInput("1-form samples do not match the annulus shape".into()));
        }
        if self.angular.iter().chain(&self.radial).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("1-form samples must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialPotential {
    /// Link 1-form as edge integrals, same edge order as the input.
    pub gamma_hat: Vec<f64>,
    /// Radial-major potential `A(σ, r)`.
    pub potential: Vec<f64>,
    /// Max deviation of `η_Σ - d_Σ A` across shells from its mean.
    pub residual: f64,
    /// Largest triangle circulation of the angular part.
    pub curl: f64,
    /// Exponent of the inner power-law tail used per vertex.
    pub tail_exponents: Vec<f64>,
}

/// Recovers `A` and `γ` with `η = π^*γ + dA`.
///
/// The integral over `(0, r_0)` is extrapolated from the power law fitted to
/// the two innermost shells; `mu_hint - 1` is the exponent used where the
/// data cannot determine one (vanishing or sign-changing `η_r`). Closedness
/// is enforced relative to `tol`.
pub fn radial_potential(eta: &OneFormSamples, mu_hint: f64, tol: f64) -> Result<RadialPotential> {
    eta.validate()?;
    if !mu_hint.is_finite() {
        return Err(Error::InvalidInput("rate hint must be finite".into()));
    }
    let n = eta.mesh.num_vertices();
    let ne = eta.edges.len();
    let shells = eta.radii.len();
    let r = &eta.radii;
    let scale = eta.angular.iter().chain(&eta.radial).fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);

    let edge_index: HashMap<(usize, usize), usize> = eta.edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut curl = 0.0f64;
    for k in 0..shells {
        let ang = &eta.angular[k * ne..(k + 1) * ne];
        for tri in eta.mesh.triangles() {
            let c: f64 = (0..3)
                .map(|s| {
                    let (a, b) = (tri[s], tri[(s + 1) % 3]);
                    if a < b {
                        ang[edge_index[&(a, b)]]
                    } else {
                        -ang[edge_index[&(b, a)]]
                    }
                })
                .sum();
            curl = curl.max(c.abs());
        }
    }
    if curl > tol * scale {
        return Err(Error::Closedness { residual: curl / scale });
    }

    let mut tail_exponents = Vec::with_capacity(n);
    let mut potential = vec![0.0; shells * n];
    for v in 0..n {
        let y: Vec<f64> = (0..shells).map(|k| eta.radial[k * n + v]).collect();
        let exponent = if y[0] != 0.0 && y[1] != 0.0 && y[0].signum() == y[1].signum() {
            (y[1] / y[0]).ln() / (r[1] / r[0]).ln()
        } else {
            mu_hint - 1.0
        };
        if !(exponent > -1.0) {
            return Err(Error::Integrability(format!(
                "radial component behaves like r^{exponent:.3} near the vertex; the integral from 0 diverges"
            )));
        }
        tail_exponents.push(exponent);
        let mut acc = y[0] * r[0] / (exponent + 1.0);
        potential[v] = acc;
        for k in 1..shells {
            acc += interval_integral(r, &y, k - 1);
            potential[k * n + v] = acc;
        }
    }

    let mut remainder = vec![0.0; shells * ne];
    for k in 0..shells {
        for (e, &(i, j)) in eta.edges.iter().enumerate() {
            remainder[k * ne + e] = eta.angular[k * ne + e] - (potential[k * n + j] - potential[k * n + i]);
        }
    }
    let gamma_hat: Vec<f64> =
        (0..ne).map(|e| (0..shells).map(|k| remainder[k * ne + e]).sum::<f64>() / shells as f64).collect();
    let residual = (0..shells * ne).map(|idx| (remainder[idx] - gamma_hat[idx % ne]).abs()).fold(0.0, f64::max);
    if residual > tol * scale {
        return Err(Error::Closedness { residual: residual / scale });
    }
    Ok(RadialPotential { gamma_hat, potential, residual, curl, tail_exponents })
}

/// `∫_{r_k}^{r_{k+1}} y dr = ∫ y r dt` in `t = log r`, with the cubic in `t`
/// through the four nearest shells integrated by 3-point Gauss-Legendre.
fn interval_integral(r: &[f64], y: &[f64], k: usize) -> f64 {
    let n = r.len();
    let start = k.saturating_sub(1).min(n - 4);
    let ts: Vec<f64> = r[start..start + 4].iter().map(|x| x.ln()).collect();
    let gs: Vec<f64> = (start..start + 4).map(|i| y[i] * r[i]).collect();
    let lagrange = |x: f64| -> f64 {
        (0..4)
            .map(|a| {
                let basis: f64 = (0..4).filter(|&b| b != a).map(|b| (x - ts[b]) / (ts[a] - ts[b])).product();
                gs[a] * basis
            })
            .sum()
    };
    let (a, b) = (r[k].ln(), r[k + 1].ln());
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let g = (0.6f64).sqrt();
    half * (5.0 / 9.0 * lagrange(mid - half * g) + 8.0 / 9.0 * lagrange(mid) + 5.0 / 9.0 * lagrange(mid + half * g))
}
