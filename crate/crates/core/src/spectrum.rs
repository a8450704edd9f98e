//! Eigenvalue tables of the link Laplacian `Δ_Σ = d*d`.
//!
//! Three backends produce a [`SpectrumTable`]: round spheres (harmonic
//! polynomial dimensions), flat tori (dual lattice enumeration) and
//! triangulated surfaces (piecewise-linear finite elements with cotangent
//! stiffness and lumped mass).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigen::{smallest_generalized, EigenOptions};
use crate::lattice::LatticeBasis;
use crate::mesh::{cross_norm, dot_product, TriMesh};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Relative clustering width: eigenvalues closer than `tol * (1 + λ)` are
/// one entry.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    SphereAnalytic,
    TorusAnalytic,
    Fem,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub mult: usize,
}

/// Sorted eigenvalue/multiplicity list; every eigenvalue up to
/// `coverage_max` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct SpectrumTable {
    link_dim: usize,
    coverage_max: f64,
    entries: Vec<SpectrumEntry>,
    source: SpectrumSource,
}

#[derive(Deserialize)]
struct RawSpectrum {
    link_dim: usize,
    coverage_max: f64,
    entries: Vec<SpectrumEntry>,
    source: SpectrumSource,
}

impl TryFrom<RawSpectrum> for SpectrumTable {
    type Error = Error;
    fn try_from(r: RawSpectrum) -> Result<Self> {
        SpectrumTable::new(r.link_dim, r.entries, r.source, r.coverage_max)
    }
}

impl SpectrumTable {
    pub fn new(
        link_dim: usize,
        entries: Vec<SpectrumEntry>,
        source: SpectrumSource,
        coverage_max: f64,
    ) -> Result<Self> {
        if link_dim == 0 {
            return Err(Error::InvalidSpectrum("link dimension must be positive".into()));
        }
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidSpectrum("spectrum has no entries".into()))?;
        if first.lambda != 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "first eigenvalue must be 0 (constants), found {}",
                first.lambda
            )));
        }
        for e in &entries {
            if !e.lambda.is_finite() || e.lambda < 0.0 {
                return Err(Error::InvalidSpectrum(format!("eigenvalue {} is negative or not finite", e.lambda)));
            }
            if e.mult == 0 {
                return Err(Error::InvalidSpectrum(format!("eigenvalue {} has zero multiplicity", e.lambda)));
            }
        }
        for w in entries.windows(2) {
            if w[1].lambda <= w[0].lambda {
                return Err(Error::InvalidSpectrum("eigenvalues must be strictly ascending".into()));
            }
            if w[1].lambda - w[0].lambda <= DEFAULT_CLUSTER_TOL * (1.0 + w[0].lambda) {
                return Err(Error::InvalidSpectrum(format!(
                    "eigenvalues {} and {} are within the clustering tolerance",
                    w[0].lambda, w[1].lambda
                )));
            }
        }
        let top = entries.last().map(|e| e.lambda).unwrap_or(0.0);
        if !(coverage_max >= top) {
            return Err(Error::InvalidSpectrum(format!(
                "coverage_max {coverage_max} is below the largest listed eigenvalue {top}"
            )));
        }
        Ok(SpectrumTable { link_dim, coverage_max, entries, source })
    }

    pub fn link_dim(&self) -> usize {
        self.link_dim
    }

    /// Ambient dimension `m` of the cone over this link.
    pub fn cone_dim(&self) -> usize {
        self.link_dim + 1
    }

    pub fn coverage_max(&self) -> f64 {
        self.coverage_max
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    /// Multiplicity of the zero eigenvalue, i.e. the number of connected
    /// components of the link.
    pub fn zero_multiplicity(&self) -> usize {
        self.entries[0].mult
    }

    /// Smallest nonzero eigenvalue, if listed.
    pub fn first_nonzero(&self) -> Option<f64> {
        self.entries.get(1).map(|e| e.lambda)
    }

    /// Total multiplicity of entries within `rel_tol * (1 + λ)` of `lambda`.
    pub fn multiplicity_near(&self, lambda: f64, rel_tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| (e.lambda - lambda).abs() <= rel_tol * (1.0 + lambda))
            .map(|e| e.mult)
            .sum()
    }

    /// Spectrum of the disjoint union of two links.
    pub fn merge(&self, other: &SpectrumTable) -> Result<SpectrumTable> {
        if self.link_dim != other.link_dim {
            return Err(Error::InvalidSpectrum("cannot merge spectra of links of different dimension".into()));
        }
        let coverage = self.coverage_max.min(other.coverage_max);
        let mut all: Vec<SpectrumEntry> = self
            .entries
            .iter()
            .chain(&other.entries)
            .filter(|e| e.lambda <= coverage)
            .copied()
            .collect();
        all.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        let mut merged: Vec<SpectrumEntry> = Vec::new();
        for e in all {
            match merged.last_mut() {
                Some(last) if e.lambda - last.lambda <= DEFAULT_CLUSTER_TOL * (1.0 + last.lambda) => last.mult += e.mult,
                _ => merged.push(e),
            }
        }
        let source = if self.source == other.source { self.source } else { SpectrumSource::External };
        SpectrumTable::new(self.link_dim, merged, source, coverage)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serialises")
    }

    pub fn from_json(s: &str) -> Result<SpectrumTable> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Groups sorted eigenvalues into entries: a new entry starts whenever the
/// gap to the previous value exceeds `rel_tol * (1 + previous)`. Entries
/// report the cluster mean; a cluster within `zero_tol` of 0 is snapped to 0.
pub fn cluster_eigenvalues(values: &[f64], rel_tol: f64, zero_tol: f64) -> Vec<SpectrumEntry> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in sorted {
        match clusters.last_mut() {
            Some(c) if v - c.last().unwrap() <= rel_tol * (1.0 + c.last().unwrap().abs()) => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            let lambda = if mean.abs() <= zero_tol { 0.0 } else { mean };
            SpectrumEntry { lambda, mult: c.len() }
        })
        .collect()
}

/// Dimension of the space of harmonic homogeneous polynomials of degree `k`
/// in `m` variables: `C(k+m-1, m-1) - C(k+m-3, m-1)`.
pub fn harmonic_polynomial_dim(k: usize, m: usize) -> u64 {
    let all = binomial((k + m - 1) as u64, (m - 1) as u64);
    let lower = if k >= 2 { binomial((k + m - 3) as u64, (m - 1) as u64) } else { 0 };
    all - lower
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Spectrum of the unit sphere `S^{m-1}`: eigenvalue `k(k+m-2)` with the
/// multiplicity of degree-`k` harmonic polynomials, for `k <= degree_max`.
pub fn sphere_spectrum(m: usize, degree_max: usize) -> Result<SpectrumTable> {
    if m < 3 {
        return Err(Error::InvalidDimension(format!("cone dimension m = {m} must be at least 3")));
    }
    let entries = (0..=degree_max)
        .map(|k| SpectrumEntry {
            lambda: (k * (k + m - 2)) as f64,
            mult: harmonic_polynomial_dim(k, m) as usize,
        })
        .collect();
    let coverage = (degree_max * (degree_max + m - 2)) as f64;
    SpectrumTable::new(m - 1, entries, SpectrumSource::SphereAnalytic, coverage)
}

/// Spectrum of the flat torus `R^n/Λ`: eigenvalues `4π²|μ|²` over dual
/// lattice vectors `μ`, multiplicity counting dual vectors of equal length.
pub fn flat_torus_spectrum(lattice: &LatticeBasis, lambda_max: f64) -> Result<SpectrumTable> {
    if !(lambda_max > 0.0) {
        return Err(Error::InvalidInput(format!("lambda_max must be positive, got {lambda_max}")));
    }
    let dual = lattice.dual()?;
    let four_pi2 = 4.0 * PI * PI;
    let values: Vec<f64> = dual
        .vectors_within(lambda_max / four_pi2)
        .into_iter()
        .map(|(q, _)| four_pi2 * q)
        .filter(|&v| v <= lambda_max * (1.0 + 1e-12))
        .collect();
    let entries = cluster_eigenvalues(&values, DEFAULT_CLUSTER_TOL, 0.0);
    SpectrumTable::new(lattice.dim(), entries, SpectrumSource::TorusAnalytic, lambda_max)
}

/// Piecewise-linear finite element Laplacian on a closed triangulated
/// surface: cotangent stiffness `K` and lumped (barycentric) mass `M`.
#[derive(Debug, Clone)]
pub struct FemLaplacian {
    pub stiffness: CsrMatrix,
    pub mass: Vec<f64>,
}

impl FemLaplacian {
    pub fn assemble(mesh: &TriMesh) -> Result<FemLaplacian> {
        mesh.validate_closed()?;
        let n = mesh.num_vertices();
        let mut mass = vec![0.0; n];
        let mut triplets = Vec::with_capacity(mesh.num_triangles() * 12);
        for (t, &tri) in mesh.triangles().iter().enumerate() {
            let area = mesh.triangle_area(t);
            for &i in &tri {
                mass[i] += area / 3.0;
            }
            for c in 0..3 {
                // edge (i, j) opposite vertex k
                let (k, i, j) = (tri[c], tri[(c + 1) % 3], tri[(c + 2) % 3]);
                let a = mesh.edge_vector(k, i);
                let b = mesh.edge_vector(k, j);
                let cot = dot_product(&a, &b) / cross_norm(&a, &b);
                let w = 0.5 * cot;
                triplets.extend([(i, j, -w), (j, i, -w), (i, i, w), (j, j, w)]);
            }
        }
        Ok(FemLaplacian { stiffness: CsrMatrix::from_triplets(n, triplets), mass })
    }

    /// Discrete `Δ_Σ v = M^{-1} K v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.stiffness.mul(v).iter().zip(&self.mass).map(|(k, m)| k / m).collect()
    }

    /// `uᵀ M v`.
    pub fn mass_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(v).zip(&self.mass).map(|((a, b), m)| a * b * m).sum()
    }

    /// `uᵀ K v`.
    pub fn energy_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(self.stiffness.mul(v)).map(|(a, b)| a * b).sum()
    }

    /// Relative eigen-residual `|M^{-1}Kv - λv|_M / ((1+λ)|v|_M)`.
    pub fn mode_residual(&self, v: &[f64], lambda: f64) -> f64 {
        let lv = self.apply(v);
        let r: Vec<f64> = lv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
        let num = self.mass_inner(&r, &r).sqrt();
        let den = self.mass_inner(v, v).sqrt() * (1.0 + lambda.abs());
        if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    }
}

/// Converged finite element eigenpairs; vectors are `M`-orthonormal.
#[derive(Debug, Clone)]
pub struct FemModes {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub norm_estimate: f64,
    pub iterations: usize,
}

pub fn fem_modes(mesh: &TriMesh, count: usize, tol: f64) -> Result<(FemLaplacian, FemModes)> {
    let fem = FemLaplacian::assemble(mesh)?;
    let n = mesh.num_vertices();
    if count == 0 || count + 1 > n {
        return Err(Error::InvalidInput(format!(
            "count {count} must lie in 1..={} for a mesh with {n} vertices",
            n.saturating_sub(1)
        )));
    }
    let pairs = smallest_generalized(&fem.stiffness, &fem.mass, &EigenOptions::new(count, tol))?;
    let modes = FemModes {
        values: pairs.values,
        vectors: pairs.vectors,
        residuals: pairs.residuals,
        norm_estimate: pairs.norm_estimate,
        iterations: pairs.iterations,
    };
    Ok((fem, modes))
}

/// The `count` smallest eigenvalues of the finite element Laplacian,
/// clustered with [`DEFAULT_CLUSTER_TOL`].
pub fn fem_spectrum(mesh: &TriMesh, count: usize, tol: f64) -> Result<SpectrumTable> {
    fem_spectrum_with(mesh, count, tol, DEFAULT_CLUSTER_TOL)
}

pub fn fem_spectrum_with(mesh: &TriMesh, count: usize, tol: f64, cluster_tol: f64) -> Result<SpectrumTable> {
    if !(cluster_tol >= 0.0) {
        return Err(Error::InvalidInput("cluster tolerance must be non-negative".into()));
    }
    let (_, modes) = fem_modes(mesh, count, tol)?;
    spectrum_from_modes(&modes, tol, cluster_tol)
}

pub fn spectrum_from_modes(modes: &FemModes, tol: f64, cluster_tol: f64) -> Result<SpectrumTable> {
    let zero_tol = cluster_tol.max(DEFAULT_CLUSTER_TOL) + tol * modes.norm_estimate;
    let entries = cluster_eigenvalues(&modes.values, cluster_tol.max(DEFAULT_CLUSTER_TOL), zero_tol);
    let coverage = entries.last().map(|e| e.lambda).unwrap_or(0.0);
    SpectrumTable::new(2, entries, SpectrumSource::Fem, coverage)
}
