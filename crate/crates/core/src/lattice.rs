//! Lattices of flat tori `R^n / Λ` and short-vector enumeration.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Basis of a full-rank lattice in `R^n`; each row is a lattice generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LatticeBasis {
    basis: DMatrix<f64>,
    gram: DMatrix<f64>,
}

impl LatticeBasis {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLattice("basis must be a non-empty square matrix".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidLattice("basis has non-finite entries".into()));
        }
        let basis = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let gram = &basis * basis.transpose();
        if gram.clone().cholesky().is_none() {
            return Err(Error::InvalidLattice("Gram matrix is not positive definite (singular basis)".into()));
        }
        let scale = gram.diagonal().max();
        if basis.determinant().abs() <= 1e-12 * scale.powf(n as f64 / 2.0) {
            return Err(Error::InvalidLattice("basis is numerically singular".into()));
        }
        Ok(LatticeBasis { basis, gram })
    }

    /// `scale * Z^n`.
    pub fn cubic(n: usize, scale: f64) -> Result<Self> {
        Self::from_rows((0..n).map(|i| (0..n).map(|j| if i == j { scale } else { 0.0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.basis.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// Dual lattice `{μ : μ·v ∈ Z for all v ∈ Λ}`, rows of `B^{-T}`.
    pub fn dual(&self) -> Result<LatticeBasis> {
        let inv = self
            .basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidLattice("basis is not invertible".into()))?;
        let dual = inv.transpose();
        Self::from_rows(dual.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// Covolume `|det B|`.
    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    /// All lattice vectors with squared length `<= bound`, as
    /// `(squared_length, integer coefficients)`, found by Fincke–Pohst
    /// enumeration over the Cholesky factor of the Gram matrix.
    pub fn vectors_within(&self, bound: f64) -> Vec<(f64, Vec<i64>)> {
        let n = self.dim();
        let mut out = Vec::new();
        if bound < 0.0 {
            return out;
        }
        // gram = R^T R with R upper triangular
        let r = self
            .gram
            .clone()
            .cholesky()
            .expect("validated positive definite")
            .l()
            .transpose();
        let mut coeffs = vec![0i64; n];
        enumerate_level(&r, bound * (1.0 + 1e-12) + 1e-300, n, 0.0, &mut coeffs, &mut |c| {
            let v = self.basis.transpose() * nalgebra::DVector::from_iterator(n, c.iter().map(|&k| k as f64));
            out.push((v.norm_squared(), c.to_vec()));
        });
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        out
    }
}

impl TryFrom<Vec<Vec<f64>>> for LatticeBasis {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        LatticeBasis::from_rows(rows)
    }
}

impl From<LatticeBasis> for Vec<Vec<f64>> {
    fn from(l: LatticeBasis) -> Self {
        l.rows()
    }
}

fn enumerate_level(
    r: &DMatrix<f64>,
    bound: f64,
    level: usize,
    used: f64,
    coeffs: &mut [i64],
    emit: &mut dyn FnMut(&[i64]),
) {
    if level == 0 {
        emit(coeffs);
        return;
    }
    let i = level - 1;
    let n = coeffs.len();
    let center: f64 = (i + 1..n).map(|j| r[(i, j)] * coeffs[j] as f64).sum();
    let budget = (bound - used).max(0.0).sqrt();
    let rii = r[(i, i)];
    let lo = ((-budget - center) / rii).ceil() as i64;
    let hi = ((budget - center) / rii).floor() as i64;
    for k in lo..=hi {
        let t = rii * k as f64 + center;
        let next = used + t * t;
        if next <= bound {
            coeffs[i] = k;
            enumerate_level(r, bound, i, next, coeffs, emit);
        }
    }
    coeffs[i] = 0;
}

/// Lattice of the flat `(m-1)`-torus link of the Clifford cone
/// `{m^{-1/2}(e^{iθ_1},…,e^{iθ_m}) : Σθ_j = 0}`: the vectors of `2πZ^m`
/// with zero coordinate sum under the quadratic form `|θ|²/m`, written in an
/// orthonormal basis of the hyperplane `Σθ_j = 0`.
pub fn clifford_link_lattice(m: usize) -> Result<LatticeBasis> {
    if m < 3 {
        return Err(Error::InvalidDimension(format!("cone dimension m = {m} must be at least 3")));
    }
    let u = hyperplane_basis(m);
    let scale = 2.0 * std::f64::consts::PI / (m as f64).sqrt();
    let rows = (0..m - 1)
        .map(|j| {
            // generator 2π (e_j - e_m), rescaled by m^{-1/2}
            (0..m - 1).map(|c| scale * (u[(j, c)] - u[(m - 1, c)])).collect()
        })
        .collect();
    LatticeBasis::from_rows(rows)
}

/// Orthonormal basis (columns) of `{x ∈ R^m : Σx = 0}` (Helmert basis).
fn hyperplane_basis(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m - 1, |i, c| {
        let k = (c + 1) as f64;
        let norm = (k * (k + 1.0)).sqrt();
        if i <= c {
            1.0 / norm
        } else if i == c + 1 {
            -k / norm
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dual_of_scaled_cubic_lattice() {
        let l = LatticeBasis::cubic(2, 2.0 * PI).unwrap();
        let d = l.dual().unwrap();
        assert!((d.basis()[(0, 0)] - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let prod = l.basis() * d.basis().transpose();
        assert!((prod - DMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn enumeration_matches_brute_force_box() {
        let l = LatticeBasis::from_rows(vec![vec![1.0, 0.3, 0.0], vec![0.2, 1.1, 0.4], vec![0.0, -0.5, 0.9]]).unwrap();
        let bound = 6.0;
        let got = l.vectors_within(bound);
        let mut brute = 0;
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                for c in -8i64..=8 {
                    let v = l.basis().transpose() * nalgebra::DVector::from_vec(vec![a as f64, b as f64, c as f64]);
                    if v.norm_squared() <= bound {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(got.len(), brute);
        assert!(got.iter().all(|(q, _)| *q <= bound * (1.0 + 1e-12)));
    }

    #[test]
    fn clifford_lattice_m3_shortest_vectors() {
        let l = clifford_link_lattice(3).unwrap();
        assert_eq!(l.dim(), 2);
        let target = 8.0 * PI * PI / 3.0;
        let short: Vec<_> = l.vectors_within(target * 1.001).into_iter().filter(|(q, _)| *q > 0.0).collect();
        assert_eq!(short.len(), 6);
        assert!(short.iter().all(|(q, _)| (q - target).abs() < 1e-10 * target));
    }

    #[test]
    fn clifford_lattice_rank_and_dimension_errors() {
        assert_eq!(clifford_link_lattice(4).unwrap().dim(), 3);
        assert!(matches!(clifford_link_lattice(2), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn singular_basis_rejected() {
        assert!(LatticeBasis::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
        assert!(LatticeBasis::from_rows(vec![vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let l = clifford_link_lattice(3).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        let back: LatticeBasis = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
