//! Decay-model fitting for sampled distances `y(r)` to a tangent cone as
//! `r → 0`: conical power law `y ~ r^{μ-1}` against logarithmic decay
//! `y ~ r |log r|^{-α}`.
//!
//! Both models are linear after a change of variables and are fitted by
//! weighted least squares, with trapezoid weights in `log r` so that every
//! decade counts equally.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::indicial::{rate_admissible, ExceptionalSet};
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 8;
pub const MIN_DECADES: f64 = 3.0;
/// Default residual ratio required for a verdict.
pub const DEFAULT_MARGIN: f64 = 1.2;
/// Residual floor; keeps margins finite for noise-free data.
const RESIDUAL_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySeries {
    r: Vec<f64>,
    y: Vec<f64>,
}

impl DecaySeries {
    pub fn new(r: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if r.len() != y.len() {
            return Err(Error::InvalidInput("radius and value columns differ in length".into()));
        }
        if r.len() < MIN_SAMPLES {
            return Err(Error::InsufficientData(format!("{} samples, at least {MIN_SAMPLES} required", r.len())));
        }
        if r.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::InvalidInput("radii must lie in (0, 1)".into()));
        }
        if r.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidInput("radii must be strictly decreasing".into()));
        }
        if y.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("values must be positive and finite".into()));
        }
        let decades = (r[0] / r[r.len() - 1]).log10();
        if decades < MIN_DECADES {
            return Err(Error::InsufficientData(format!("radii span {decades:.2} decades, at least {MIN_DECADES} required")));
        }
        Ok(DecaySeries { r, y })
    }

    /// Parses `r,y` lines; a non-numeric first line is taken as a header,
    /// blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut y = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = match fields.as_slice() {
                [a, b] => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some((a, b)) => {
                    r.push(a);
                    y.push(b);
                }
                None if r.is_empty() && lineno == 0 => continue,
                None => return Err(Error::Parse(format!("line {}: expected `r,y`, got `{line}`", lineno + 1))),
            }
        }
        Self::new(r, y)
    }

    pub fn from_fn(r: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let y = r.iter().map(|&x| f(x)).collect();
        Self::new(r, y)
    }

    /// `count` log-uniform radii from `r_hi` down to `r_lo`.
    pub fn log_radii(r_hi: f64, r_lo: f64, count: usize) -> Vec<f64> {
        let (a, b) = (r_hi.ln(), r_lo.ln());
        (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn log_weights(&self) -> Vec<f64> {
        let t: Vec<f64> = self.r.iter().map(|x| x.ln()).collect();
        let n = t.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { t[i - 1] - t[i] } else { 0.0 };
                let right = if i + 1 < n { t[i] - t[i + 1] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayModel {
    /// `y = c r^{μ-1}`; parameter `μ`.
    Power,
    /// `y = c r |log r|^{-α}`; parameter `α`.
    Logpower,
}

impl fmt::Display for DecayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayModel::Power => "power",
            DecayModel::Logpower => "logpower",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub parameter: f64,
    pub intercept: f64,
    /// Weighted RMS residual of the linear fit.
    pub residual: f64,
}

pub fn fit_decay(series: &DecaySeries, model: DecayModel) -> DecayFit {
    let (x, z): (Vec<f64>, Vec<f64>) = series
        .r
        .iter()
        .zip(&series.y)
        .map(|(&r, &y)| match model {
            DecayModel::Power => (r.ln(), y.ln()),
            DecayModel::Logpower => (r.ln().abs().ln(), y.ln() - r.ln()),
        })
        .unzip();
    let w = series.log_weights();
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / sw;
    let zm = w.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(&x).map(|(a, b)| a * (b - xm).powi(2)).sum();
    let sxz: f64 = w.iter().zip(&x).zip(&z).map(|((a, b), c)| a * (b - xm) * (c - zm)).sum();
    let slope = sxz / sxx;
    let intercept = zm - slope * xm;
    let sse: f64 = w.iter().zip(&x).zip(&z).map(|((a, b), c)| a * (c - intercept - slope * b).powi(2)).sum();
    let residual = (sse / sw).sqrt();
    let parameter = match model {
        DecayModel::Power => slope + 1.0,
        DecayModel::Logpower => -slope,
    };
    DecayFit { model, parameter, intercept, residual }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayVerdict {
    /// Power law with `μ ∈ (2, 3)` and no exceptional weight in `(2, μ]`.
    Conical,
    /// Power law with `μ ∈ (2, 3)`; no exceptional set was supplied.
    ConicalRateUnchecked,
    /// Power law with `μ ∈ (2, 3)` but an exceptional weight in `(2, μ]`.
    InadmissibleRate,
    /// Power law with `μ >= 3`: decays at every rate below 3.
    PowerAboveWindow,
    /// Power law with `μ <= 2`: the distance is not `o(r)`.
    NotLittleO,
    /// Logarithmic decay: not a conical singularity.
    NotConical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayClassification {
    pub model: DecayModel,
    pub parameter: f64,
    /// Residual ratio loser / winner.
    pub margin: f64,
    pub verdict: DecayVerdict,
    pub power: DecayFit,
    pub logpower: DecayFit,
}

/// Fits both models and keeps the one with the smaller residual; an
/// ambiguous fit (`margin < threshold`) is an error rather than a guess.
pub fn classify_decay(series: &DecaySeries, set: Option<&ExceptionalSet>, threshold: f64) -> Result<DecayClassification> {
    if !(threshold >= 1.0) {
        return Err(Error::InvalidInput(format!("margin threshold {threshold} must be at least 1")));
    }
    let power = fit_decay(series, DecayModel::Power);
    let logpower = fit_decay(series, DecayModel::Logpower);
    let (winner, loser) = if power.residual <= logpower.residual { (power, logpower) } else { (logpower, power) };
    let margin = (loser.residual + RESIDUAL_FLOOR) / (winner.residual + RESIDUAL_FLOOR);
    if margin < threshold {
        return Err(Error::Indeterminate { margin, threshold });
    }
    let mu = winner.parameter;
    let verdict = match winner.model {
        DecayModel::Logpower => DecayVerdict::NotConical,
        DecayModel::Power if mu <= 2.0 => DecayVerdict::NotLittleO,
        DecayModel::Power if mu >= 3.0 => DecayVerdict::PowerAboveWindow,
        DecayModel::Power => match set {
            None => DecayVerdict::ConicalRateUnchecked,
            Some(d) if rate_admissible(d, mu)? => DecayVerdict::Conical,
            Some(_) => DecayVerdict::InadmissibleRate,
        },
    };
    Ok(DecayClassification { model: winner.model, parameter: mu, margin, verdict, power, logpower })
}
