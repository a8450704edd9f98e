//! Weight calculus of the Laplacian on cones: indicial roots, the set of
//! exceptional weights `D_Σ` with multiplicities `m_Σ`, the growth count
//! `N_Σ`, Fredholm windows and indices, decay-rate admissibility and
//! improvement, and the rigidity count at the eigenvalue `2m`.
//!
//! Conventions for the growth count, copied exactly:
//!
//! | `δ`        | `N_Σ(δ)`                                  |
//! |------------|-------------------------------------------|
//! | `δ < 0`    | `-Σ m_Σ(α)` over roots `α ∈ (δ, 0)` (open) |
//! | `δ >= 0`   | `+Σ m_Σ(α)` over roots `α ∈ [0, δ]` (closed) |
//!
//! so `N_Σ` is increasing, upper semicontinuous, jumps by `m_Σ(α)` at each
//! root, and vanishes on `(2-m, 0)`.

use serde::{Deserialize, Serialize};

use crate::spectrum::{SpectrumSource, SpectrumTable, DEFAULT_CLUSTER_TOL};
use crate::{Error, Result};

/// Relative distance `|β-α| <= WALL_TOL (1 + |α|)` at which a weight is
/// treated as sitting on the exceptional weight `α`.
pub const WALL_TOL: f64 = 1e-9;

/// Relative eigenvalue match width used by [`rigidity_test`] for finite
/// element spectra, whose eigenvalue `2m` is only approximate.
pub const FEM_MATCH_TOL: f64 = 2e-2;

pub fn on_wall(beta: f64, alpha: f64) -> bool {
    (beta - alpha).abs() <= WALL_TOL * (1.0 + alpha.abs())
}

fn check_m(m: usize) -> Result<()> {
    if m < 3 {
        // log-type harmonic functions appear for m = 2 and the index theory
        // implemented here does not apply
        return Err(Error::InvalidDimension(format!("cone dimension m = {m} must be at least 3")));
    }
    Ok(())
}

/// Both solutions of `α(α+m-2) = λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicialPair {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    /// A repeated root would admit `r^α log r` solutions; never true for
    /// `λ >= 0, m >= 3` since the discriminant `(m-2)² + 4λ` is positive.
    pub log_possible: bool,
}

pub fn indicial_roots(eigenvalue: f64, m: usize) -> Result<IndicialPair> {
    check_m(m)?;
    if !(eigenvalue >= 0.0) || !eigenvalue.is_finite() {
        return Err(Error::InvalidSpectrum(format!("eigenvalue {eigenvalue} must be finite and non-negative")));
    }
    let b = m as f64 - 2.0;
    let disc = b * b + 4.0 * eigenvalue;
    let s = disc.sqrt();
    // α₊ = (s - b)/2 written without cancellation
    let alpha_plus = 2.0 * eigenvalue / (b + s);
    let alpha_minus = -(b + s) / 2.0;
    Ok(IndicialPair { alpha_minus, alpha_plus, log_possible: disc == 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicialRoot {
    pub alpha: f64,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub branch: Branch,
}

/// Exceptional weights of one cone over a certified range `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalSet {
    m: usize,
    roots: Vec<IndicialRoot>,
    range: (f64, f64),
    spectrum_coverage_max: f64,
}

/// Largest eigenvalue whose roots can land in `[lo, hi]`.
pub fn required_coverage(m: usize, lo: f64, hi: f64) -> f64 {
    let f = |a: f64| a * (a + m as f64 - 2.0);
    f(lo).max(f(hi)).max(0.0)
}

/// Collects every indicial root in `[lo, hi]`, refusing ranges that the
/// spectrum's coverage cannot certify as complete.
pub fn exceptional_set(spectrum: &SpectrumTable, m: usize, lo: f64, hi: f64) -> Result<ExceptionalSet> {
    check_m(m)?;
    if spectrum.cone_dim() != m {
        return Err(Error::InvalidInput(format!(
            "spectrum of a {}-dimensional link cannot describe a cone of dimension {m}",
            spectrum.link_dim()
        )));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("range [{lo}, {hi}] is empty or not finite")));
    }
    let required = required_coverage(m, lo, hi);
    if spectrum.coverage_max() < required - 1e-12 * (1.0 + required) {
        return Err(Error::Coverage { required, available: spectrum.coverage_max() });
    }
    let inside = |a: f64| a >= lo - WALL_TOL * (1.0 + lo.abs()) && a <= hi + WALL_TOL * (1.0 + hi.abs());
    let mut roots = Vec::new();
    for e in spectrum.entries() {
        let pair = indicial_roots(e.lambda, m)?;
        for (alpha, branch) in [(pair.alpha_minus, Branch::Minus), (pair.alpha_plus, Branch::Plus)] {
            if inside(alpha) {
                roots.push(IndicialRoot { alpha, eigenvalue: e.lambda, multiplicity: e.mult, branch });
            }
        }
    }
    roots.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(ExceptionalSet { m, roots, range: (lo, hi), spectrum_coverage_max: spectrum.coverage_max() })
}

impl ExceptionalSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn roots(&self) -> &[IndicialRoot] {
        &self.roots
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn spectrum_coverage_max(&self) -> f64 {
        self.spectrum_coverage_max
    }

    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        self.range.0 <= lo && hi <= self.range.1
    }

    fn require(&self, lo: f64, hi: f64) -> Result<()> {
        if self.contains_interval(lo, hi) {
            Ok(())
        } else {
            // the set certifies only the eigenvalues its range needed
            Err(Error::Coverage {
                required: required_coverage(self.m, lo.min(self.range.0), hi.max(self.range.1)),
                available: required_coverage(self.m, self.range.0, self.range.1),
            })
        }
    }

    /// The root `β` sits on, if any.
    pub fn wall_at(&self, beta: f64) -> Option<&IndicialRoot> {
        self.roots.iter().find(|r| on_wall(beta, r.alpha))
    }

    /// `m_Σ(α)`, or 0 when `α` is not exceptional.
    pub fn multiplicity(&self, alpha: f64) -> usize {
        self.wall_at(alpha).map(|r| r.multiplicity).unwrap_or(0)
    }

    /// Connected component of `R \ D_Σ` containing `beta`, clipped to the
    /// certified range.
    pub fn window(&self, beta: f64) -> Result<(f64, f64)> {
        self.require(beta, beta)?;
        if let Some(r) = self.wall_at(beta) {
            return Err(Error::Wall { cone: 0, beta, alpha: r.alpha });
        }
        let lo = self.roots.iter().rev().find(|r| r.alpha < beta).map(|r| r.alpha).unwrap_or(self.range.0);
        let hi = self.roots.iter().find(|r| r.alpha > beta).map(|r| r.alpha).unwrap_or(self.range.1);
        Ok((lo, hi))
    }
}

/// `N_Σ(δ)` with the endpoint conventions in the module table.
pub fn growth_count(set: &ExceptionalSet, delta: f64) -> Result<i64> {
    set.require(delta.min(0.0), delta.max(0.0))?;
    let total = if delta < 0.0 {
        -set.roots
            .iter()
            .filter(|r| r.alpha > delta && r.alpha < 0.0)
            .map(|r| r.multiplicity as i64)
            .sum::<i64>()
    } else {
        set.roots
            .iter()
            .filter(|r| r.alpha >= 0.0 && r.alpha <= delta)
            .map(|r| r.multiplicity as i64)
            .sum::<i64>()
    };
    Ok(total)
}

/// One weight per singular point, each paired with its cone's exceptional set.
#[derive(Debug, Clone)]
pub struct WeightVector<'a> {
    betas: Vec<f64>,
    cones: Vec<&'a ExceptionalSet>,
}

impl<'a> WeightVector<'a> {
    pub fn new(betas: Vec<f64>, cones: Vec<&'a ExceptionalSet>) -> Result<Self> {
        if betas.is_empty() || betas.len() != cones.len() {
            return Err(Error::InvalidInput(format!(
                "need one weight per cone ({} weights, {} cones)",
                betas.len(),
                cones.len()
            )));
        }
        let m = cones[0].m();
        if cones.iter().any(|c| c.m() != m) {
            return Err(Error::InvalidInput("all cones must have the same dimension".into()));
        }
        for (i, (&b, c)) in betas.iter().zip(&cones).enumerate() {
            if !b.is_finite() {
                return Err(Error::InvalidInput(format!("weight {i} is not finite")));
            }
            if !c.contains_interval(b, b) {
                return Err(Error::Coverage { required: required_coverage(m, b, b), available: c.spectrum_coverage_max() });
            }
        }
        Ok(WeightVector { betas, cones })
    }

    /// A single cone with weight `beta`.
    pub fn single(beta: f64, cone: &'a ExceptionalSet) -> Result<Self> {
        Self::new(vec![beta], vec![cone])
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn cones(&self) -> &[&'a ExceptionalSet] {
        &self.cones
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Compact manifold with conical singularities: `ind = -Σ N_Σi(β_i)`.
    Conical,
    /// Asymptotically conical manifold, one end: `ind = N_Σ(β)`.
    Ac,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WallHit {
    pub cone: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub fredholm: bool,
    pub index: Option<i64>,
    pub per_cone_counts: Vec<i64>,
    pub wall: Option<WallHit>,
    /// Component of `R \ D_Σi` containing `β_i`; `None` for a cone whose
    /// weight is on a wall.
    pub windows: Vec<Option<(f64, f64)>>,
}

/// Fredholm verdict and index without failing on walls.
pub fn fredholm_report(weights: &WeightVector, convention: Convention) -> Result<IndexReport> {
    if convention == Convention::Ac && weights.betas.len() != 1 {
        return Err(Error::Precondition("the asymptotically conical convention takes exactly one end".into()));
    }
    let mut counts = Vec::new();
    let mut windows = Vec::new();
    let mut wall = None;
    for (i, (&beta, cone)) in weights.betas.iter().zip(&weights.cones).enumerate() {
        counts.push(growth_count(cone, beta)?);
        match cone.wall_at(beta) {
            Some(r) => {
                wall.get_or_insert(WallHit { cone: i, alpha: r.alpha });
                windows.push(None);
            }
            None => windows.push(Some(cone.window(beta)?)),
        }
    }
    let fredholm = wall.is_none();
    let index = fredholm.then(|| match convention {
        Convention::Conical => -counts.iter().sum::<i64>(),
        Convention::Ac => counts[0],
    });
    Ok(IndexReport { fredholm, index, per_cone_counts: counts, wall, windows })
}

/// Index of the weighted Laplacian; a weight on an exceptional value is an
/// error so that no downstream computation consumes a non-Fredholm weight.
pub fn index(weights: &WeightVector, convention: Convention) -> Result<IndexReport> {
    let report = fredholm_report(weights, convention)?;
    if let Some(w) = report.wall {
        return Err(Error::Wall { cone: w.cone, beta: weights.betas[w.cone], alpha: w.alpha });
    }
    Ok(report)
}

/// Reference kernel dimensions of the Laplacian on a compact connected
/// manifold with conical singularities: trivial when every weight is
/// positive, the constants when every weight lies in `(2-m, 0)`; `None`
/// elsewhere (not tabulated).
pub fn reference_kernel_dim(betas: &[f64], m: usize) -> Option<usize> {
    let gap = 2.0 - m as f64;
    if betas.iter().all(|&b| b > 0.0) {
        Some(0)
    } else if betas.iter().all(|&b| b > gap && b < 0.0) {
        Some(1)
    } else {
        None
    }
}

fn check_conical_rate(mu: f64) -> Result<()> {
    if !(mu > 2.0 && mu < 3.0) {
        return Err(Error::InvalidRate {
            rate: mu,
            reason: "conical decay rates must lie in the open interval (2, 3)".into(),
        });
    }
    Ok(())
}

/// Roots strictly above 2 (beyond the wall tolerance) and at most `upper`.
fn roots_above_two(set: &ExceptionalSet, upper: f64) -> impl Iterator<Item = &IndicialRoot> {
    set.roots
        .iter()
        .filter(move |r| r.alpha > 2.0 && !on_wall(2.0, r.alpha) && r.alpha <= upper)
}

/// A rate `μ ∈ (2,3)` is admissible when `(2, μ] ∩ D_Σ = ∅`.
pub fn rate_admissible(set: &ExceptionalSet, mu: f64) -> Result<bool> {
    check_conical_rate(mu)?;
    set.require(2.0, 3.0)?;
    Ok(roots_above_two(set, mu).next().is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSup {
    /// Exclusive supremum of admissible rates.
    pub sup: f64,
    pub exclusive: bool,
    /// The first exceptional weight in `(2, 3)`, when one caps the rate.
    pub wall: Option<f64>,
}

/// `min(3, smallest root in (2, 3))`: every admissible rate may be improved
/// to any rate below this value.
pub fn rate_sup(set: &ExceptionalSet) -> Result<RateSup> {
    set.require(2.0, 3.0)?;
    let wall = roots_above_two(set, 3.0).map(|r| r.alpha).find(|&a| a < 3.0);
    Ok(RateSup { sup: wall.unwrap_or(3.0), exclusive: true, wall })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapTrace {
    /// Seed followed by successive improved rates; the last element is the
    /// cap.
    pub rates: Vec<f64>,
    /// Number of improvement steps taken.
    pub steps: usize,
    /// Exclusive limit reached by the trace: the first wall above 2, or 3.
    pub cap: f64,
}

/// Iterates `λ ↦ min(3, 2λ - 2)` from an admissible seed until the rate
/// reaches [`rate_sup`]. Terminates because `2^j (μ - 2) >= 1` eventually.
pub fn bootstrap_trace(set: &ExceptionalSet, seed: f64) -> Result<BootstrapTrace> {
    if !rate_admissible(set, seed)? {
        return Err(Error::Precondition(format!("seed rate {seed} is not admissible")));
    }
    let cap = rate_sup(set)?.sup;
    let mut rates = vec![seed];
    let mut current = seed;
    loop {
        let next = (2.0 * current - 2.0).min(3.0);
        if next >= cap {
            rates.push(cap);
            break;
        }
        rates.push(next);
        current = next;
    }
    let steps = rates.len() - 1;
    Ok(BootstrapTrace { rates, steps, cap })
}

/// Maximal open interval of rates `λ' < 2` equivalent to `λ`: the component
/// of `R \ D_Σ` containing `λ`, intersected with `(-∞, 2)`.
pub fn rate_component(set: &ExceptionalSet, lam: f64) -> Result<(f64, f64)> {
    if !(lam < 2.0) {
        return Err(Error::InvalidRate { rate: lam, reason: "asymptotically conical rates must be below 2".into() });
    }
    let (lo, hi) = set.window(lam)?;
    Ok((lo, hi.min(2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcRate {
    pub rate: f64,
    /// When true, `rate` is an exclusive infimum: every rate above it (and
    /// below 0) is achieved.
    pub exclusive: bool,
}

/// Best decay rate of an asymptotically conical end whose rate `λ` lies in
/// `[0, min(D_Σ ∩ (0,∞)))`: any rate above `max(-2, 2-m)` when the
/// obstruction class vanishes, else exactly rate 0.
pub fn ac_rate_improve(set: &ExceptionalSet, m: usize, lam: f64, y_is_zero: bool) -> Result<AcRate> {
    check_m(m)?;
    if set.m() != m {
        return Err(Error::InvalidInput(format!("exceptional set is for m = {}, not {m}", set.m())));
    }
    if !(lam >= 0.0) {
        return Err(Error::Precondition(format!("rate {lam} must be non-negative")));
    }
    let first_positive = set.roots.iter().map(|r| r.alpha).find(|&a| a > 0.0 && !on_wall(0.0, a));
    match first_positive {
        Some(a) if lam >= a => {
            return Err(Error::Precondition(format!("rate {lam} is not below the first positive exceptional weight {a}")))
        }
        None if lam >= set.range.1 => {
            return Err(Error::Coverage { required: required_coverage(m, 0.0, lam), available: set.spectrum_coverage_max })
        }
        _ => {}
    }
    let floor = (-2.0f64).max(2.0 - m as f64);
    Ok(if y_is_zero { AcRate { rate: floor, exclusive: true } } else { AcRate { rate: 0.0, exclusive: false } })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidityReport {
    pub m: usize,
    pub mult_at_2m: usize,
    pub expected: usize,
    pub dim_g: usize,
    pub rigid: bool,
    /// `mult_at_2m - expected`, signed: numerical spectra may split.
    pub deficiency: i64,
}

/// Rigidity count: the multiplicity of the eigenvalue `2m` against
/// `m² - 1 - dim G`, `G` the subgroup of `SU(m)` preserving the cone.
/// Finite element spectra are matched with [`FEM_MATCH_TOL`].
pub fn rigidity_test(spectrum: &SpectrumTable, m: usize, dim_g: usize) -> Result<RigidityReport> {
    let tol = match spectrum.source() {
        SpectrumSource::Fem => FEM_MATCH_TOL,
        _ => DEFAULT_CLUSTER_TOL,
    };
    rigidity_test_with_tol(spectrum, m, dim_g, tol)
}

pub fn rigidity_test_with_tol(spectrum: &SpectrumTable, m: usize, dim_g: usize, rel_tol: f64) -> Result<RigidityReport> {
    check_m(m)?;
    if spectrum.cone_dim() != m {
        return Err(Error::InvalidInput(format!(
            "spectrum of a {}-dimensional link cannot describe a cone of dimension {m}",
            spectrum.link_dim()
        )));
    }
    let target = 2.0 * m as f64;
    if spectrum.coverage_max() < target * (1.0 - rel_tol) {
        return Err(Error::Coverage { required: target, available: spectrum.coverage_max() });
    }
    let group_bound = m * m - 1;
    if dim_g > group_bound {
        return Err(Error::Precondition(format!("dim G = {dim_g} exceeds dim SU({m}) = {group_bound}")));
    }
    let mult_at_2m = spectrum.multiplicity_near(target, rel_tol);
    let expected = group_bound - dim_g;
    let deficiency = mult_at_2m as i64 - expected as i64;
    Ok(RigidityReport { m, mult_at_2m, expected, dim_g, rigid: deficiency == 0, deficiency })
}
