//! Command-line front end: each subcommand runs one computation and emits a
//! single JSON report `{command, inputs, results, tolerances, formula}`,
//! plus an `error` object when the run fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod io;

use conecalc::indicial::{self, Convention, ExceptionalSet, WeightVector};
use conecalc::lattice::clifford_link_lattice;
use conecalc::mesh::TriMesh;
use conecalc::norms::{self, ConeAnnulus, SampledField};
use conecalc::radial::{self, RadialBVP, RadialRhs};
use conecalc::sl_graph::{self, GridScalarField};
use conecalc::spectrum::{self, SpectrumTable};
use conecalc::{decay, Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Cli, Command};

/// The published report schema.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    /// Subcommand argument list that reproduces this report.
    pub inputs: Value,
    pub results: Value,
    pub tolerances: Value,
    /// Textual description of the formula evaluated.
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().and_then(|e| e["exit_code"].as_i64()).unwrap_or(0) as i32
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Partial outcome of a command: what was computed before any failure.
struct Outcome {
    results: Value,
    tolerances: Value,
    formula: &'static str,
    error: Option<Error>,
}

impl Outcome {
    fn ok(results: Value, tolerances: Value, formula: &'static str) -> Result<Self> {
        Ok(Outcome { results, tolerances, formula, error: None })
    }
}

/// Runs a parsed command line. `argv` is the subcommand argument list echoed
/// into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Report {
    let command = cli.command.name().to_string();
    let outcome = dispatch(&cli.command);
    let (results, tolerances, formula, error) = match outcome {
        Ok(o) => (o.results, o.tolerances, o.formula.to_string(), o.error),
        Err(e) => (Value::Null, Value::Null, cli.command.formula().to_string(), Some(e)),
    };
    Report {
        command,
        inputs: json!({ "args": argv }),
        results,
        tolerances,
        formula,
        error: error.map(|e| error_value(&e)),
    }
}

fn error_value(e: &Error) -> Value {
    let detail = match e {
        Error::Wall { cone, beta, alpha } => json!({ "cone": cone, "beta": beta, "alpha": alpha }),
        Error::Indeterminate { margin, threshold } => json!({ "margin": margin, "threshold": threshold }),
        Error::Coverage { required, available } => json!({ "required": required, "available": available }),
        Error::NumericalFailure { residual, .. } | Error::Solvability { residual } | Error::Closedness { residual } => {
            json!({ "residual": residual })
        }
        _ => Value::Null,
    };
    json!({ "exit_code": e.exit_code(), "message": e.to_string(), "detail": detail })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Spectrum(a) => run_spectrum(a),
        Command::Weights(a) => run_weights(a),
        Command::Rate(a) => run_rate(a),
        Command::Rigidity(a) => run_rigidity(a),
        Command::Solve(a) => run_solve(a),
        Command::Norm(a) => run_norm(a),
        Command::Slgraph(a) => run_slgraph(a),
        Command::Decay(a) => run_decay(a),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

fn run_spectrum(a: &args::SpectrumArgs) -> Result<Outcome> {
    if let Some(m) = a.source.sphere {
        let table = spectrum::sphere_spectrum(m, a.degree_max)?;
        return Outcome::ok(to_value(&table), json!({}), Command::SPHERE_FORMULA);
    }
    if let Some(m) = a.source.clifford {
        let table = spectrum::flat_torus_spectrum(&clifford_link_lattice(m)?, a.lambda_max)?;
        return Outcome::ok(to_value(&table), json!({ "cluster": spectrum::DEFAULT_CLUSTER_TOL }), Command::TORUS_FORMULA);
    }
    let mesh = match (&a.source.mesh, a.source.icosphere) {
        (Some(path), _) => TriMesh::from_off_str(&io::read_text(path)?)?,
        (None, Some(level)) => TriMesh::icosphere(level),
        (None, None) => return Err(Error::InvalidInput("no spectrum source given".into())),
    };
    let (_, modes) = spectrum::fem_modes(&mesh, a.count, a.tol)?;
    let table = spectrum::spectrum_from_modes(&modes, a.tol, a.cluster_tol)?;
    Outcome::ok(
        json!({ "spectrum": table, "eigenvalues": modes.values, "mode_residuals": modes.residuals }),
        json!({ "eigensolver": a.tol, "cluster": a.cluster_tol }),
        Command::FEM_FORMULA,
    )
}

fn exceptional_sets(paths: &[String], m: usize, lo: f64, hi: f64) -> Result<Vec<ExceptionalSet>> {
    paths.iter().map(|p| indicial::exceptional_set(&io::read_spectrum(p)?, m, lo, hi)).collect()
}

fn set_value(set: &ExceptionalSet) -> Value {
    json!({ "range": set.range(), "roots": set.roots() })
}

fn run_weights(a: &args::WeightsArgs) -> Result<Outcome> {
    if a.spectrum.len() != a.beta.len() && a.spectrum.len() != 1 {
        return Err(Error::InvalidInput("give one spectrum, or one spectrum per weight".into()));
    }
    let paths: Vec<String> = if a.spectrum.len() == 1 { vec![a.spectrum[0].clone(); a.beta.len()] } else { a.spectrum.clone() };
    let bmin = a.beta.iter().copied().fold(f64::INFINITY, f64::min);
    let bmax = a.beta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = a.lo.unwrap_or(bmin.min(0.0) - 2.0);
    let hi = a.hi.unwrap_or(bmax.max(0.0) + 2.0);
    let sets = exceptional_sets(&paths, a.m, lo, hi)?;
    let weights = WeightVector::new(a.beta.clone(), sets.iter().collect())?;
    let convention: Convention = a.convention.into();
    let report = indicial::fredholm_report(&weights, convention)?;
    let results = json!({
        "fredholm": report.fredholm,
        "index": report.index,
        "per_cone_counts": report.per_cone_counts,
        "wall": report.wall,
        "windows": report.windows,
        "reference_kernel_dim": indicial::reference_kernel_dim(&a.beta, a.m),
        "exceptional_sets": sets.iter().map(set_value).collect::<Vec<_>>(),
    });
    let error = report.wall.map(|w| Error::Wall { cone: w.cone, beta: a.beta[w.cone], alpha: w.alpha });
    Ok(Outcome {
        results,
        tolerances: json!({ "wall": indicial::WALL_TOL }),
        formula: match convention {
            Convention::Conical => Command::CONICAL_INDEX_FORMULA,
            Convention::Ac => Command::AC_INDEX_FORMULA,
        },
        error,
    })
}

fn run_rate(a: &args::RateArgs) -> Result<Outcome> {
    let lo = a.lo.unwrap_or(2.0 - a.m as f64 - 3.0);
    let hi = a.hi.unwrap_or(3.0);
    let set = indicial::exceptional_set(&io::read_spectrum(&a.spectrum)?, a.m, lo, hi)?;
    let mut results = json!({ "rate_sup": indicial::rate_sup(&set)?, "exceptional_set": set_value(&set) });
    if let Some(mu) = a.mu {
        results["admissible"] = json!({ "rate": mu, "admissible": indicial::rate_admissible(&set, mu)? });
    }
    if let Some(seed) = a.bootstrap {
        results["bootstrap"] = to_value(&indicial::bootstrap_trace(&set, seed)?);
    }
    if let Some(lam) = a.ac_rate {
        results["component"] = to_value(&indicial::rate_component(&set, lam)?);
        if lam >= 0.0 {
            results["ac_improve"] = to_value(&indicial::ac_rate_improve(&set, a.m, lam, !a.obstructed)?);
        }
    }
    Outcome::ok(results, json!({ "wall": indicial::WALL_TOL }), Command::RATE_FORMULA)
}

fn run_rigidity(a: &args::RigidityArgs) -> Result<Outcome> {
    let (table, m, default_dim_g) = if let Some(m) = a.sphere {
        (spectrum::sphere_spectrum(m, 2)?, m, m * (m - 1) / 2)
    } else if let Some(m) = a.clifford {
        let lam = 2.0 * m as f64 * 1.5;
        (spectrum::flat_torus_spectrum(&clifford_link_lattice(m)?, lam)?, m, m - 1)
    } else if let Some(path) = &a.spectrum {
        let m = a.m.ok_or_else(|| Error::InvalidInput("--m is required with --spectrum".into()))?;
        (io::read_spectrum(path)?, m, 0)
    } else {
        return Err(Error::InvalidInput("no spectrum source given".into()));
    };
    let dim_g = match (a.dim_g, a.spectrum.is_some()) {
        (Some(d), _) => d,
        (None, false) => default_dim_g,
        (None, true) => return Err(Error::InvalidInput("--dim-g is required with --spectrum".into())),
    };
    let tol = a.tol.unwrap_or(match table.source() {
        spectrum::SpectrumSource::Fem => indicial::FEM_MATCH_TOL,
        _ => spectrum::DEFAULT_CLUSTER_TOL,
    });
    let report = indicial::rigidity_test_with_tol(&table, m, dim_g, tol)?;
    Outcome::ok(to_value(&report), json!({ "match": tol }), Command::RIGIDITY_FORMULA)
}

fn branch_exponent(branch: &str, eigenvalue: f64, m: usize) -> Result<f64> {
    let pair = indicial::indicial_roots(eigenvalue, m)?;
    match branch {
        "plus" => Ok(pair.alpha_plus),
        "minus" => Ok(pair.alpha_minus),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("branch `{other}` is neither plus, minus nor a number"))),
    }
}

fn run_solve(a: &args::SolveArgs) -> Result<Outcome> {
    let rhs = match (a.rhs_coeff, a.rhs_exponent) {
        (Some(coeff), Some(exponent)) => RadialRhs::Power { coeff, exponent },
        (None, None) => RadialRhs::Zero,
        _ => return Err(Error::InvalidInput("--rhs-coeff and --rhs-exponent go together".into())),
    };
    let problem = RadialBVP {
        m: a.m,
        eigenvalue: a.lambda,
        interval: (a.r0, a.r1),
        rhs,
        inner_exponent: branch_exponent(&a.inner, a.lambda, a.m)?,
        outer_exponent: branch_exponent(&a.outer, a.lambda, a.m)?,
        outer_value: a.value,
        nodes: a.nodes,
    };
    let sol = radial::mode_poisson_solve(&problem, a.tol)?;
    let results = json!({
        "points": sol.points(),
        "residual_norm": sol.residual_norm,
        "condition_residual": sol.condition_residual,
        "selected_exponents": sol.selected_exponents,
        "free_modes": sol.free_modes,
        "branches_are_indicial": problem.branches_are_indicial(),
    });
    Outcome::ok(results, json!({ "residual": a.tol, "solvability": radial::SOLVABILITY_TOL }), Command::SOLVE_FORMULA)
}

fn run_norm(a: &args::NormArgs) -> Result<Outcome> {
    let (annulus, mesh) = match (&a.mesh, a.sphere_link) {
        (Some(path), None) => {
            let mesh = TriMesh::from_off_str(&io::read_text(path)?)?;
            let fem = spectrum::FemLaplacian::assemble(&mesh)?;
            (ConeAnnulus::over_mesh(&fem, a.r0, a.r1, a.shells)?, Some(mesh))
        }
        (None, Some(m)) => (ConeAnnulus::round_sphere(m, a.r0, a.r1, a.shells)?, None),
        _ => return Err(Error::InvalidInput("give exactly one of --mesh or --sphere-link".into())),
    };
    let field = match (&a.field, &a.field_bin, a.power) {
        (Some(p), None, None) => io::read_field_json(p)?,
        (None, Some(p), None) => SampledField::new(io::read_f64_column(p)?),
        (None, None, Some(e)) => power_field(&annulus, e),
        _ => return Err(Error::InvalidInput("give exactly one of --field, --field-bin or --power".into())),
    };
    let field = match (&mesh, &field.grad_norm) {
        (Some(mesh), None) if a.k >= 1 => field.with_mesh_gradient(&annulus, mesh)?,
        _ => field,
    };
    let p = io::parse_exponent(&a.p)?;
    let mut results = json!({
        "norm": norms::weighted_lp_norm(&annulus, &field, p, a.beta, a.k)?,
        "l2": norms::l2_norm(&annulus, &field)?,
        "samples": annulus.len(),
    });
    if let Some(e) = a.pair_power {
        let q = io::parse_exponent(a.q.as_deref().unwrap_or("inf"))?;
        let other = power_field(&annulus, e);
        results["pairing"] = to_value(&norms::dual_pairing(&annulus, &field, &other, p, q, a.beta)?);
    }
    Outcome::ok(results, json!({ "quadrature": "composite Simpson in log r" }), Command::NORM_FORMULA)
}

fn power_field(annulus: &ConeAnnulus, e: f64) -> SampledField {
    SampledField::radial(annulus, |r| r.powf(e), |r| e * r.powf(e - 1.0), |r| e * (e - 1.0) * r.powf(e - 2.0))
}

fn run_slgraph(a: &args::SlgraphArgs) -> Result<Outcome> {
    let field = match (&a.field, &a.diag) {
        (Some(path), None) => io::read_grid(path)?,
        (None, Some(diag)) => {
            let m = diag.len();
            let h = 2.0 / (a.points - 1) as f64;
            let d = diag.clone();
            GridScalarField::sample(vec![-1.0; m], vec![a.points; m], h, move |x| {
                0.5 * x.iter().zip(&d).map(|(xi, c)| c * xi * xi).sum::<f64>()
            })?
        }
        _ => return Err(Error::InvalidInput("give exactly one of --field or --diag".into())),
    };
    let defect = sl_graph::graph_defect(&field)?;
    let trace = sl_graph::hessian_trace(&field)?;
    let lagrangian = sl_graph::lagrangian_residual(&sl_graph::gradient(&field)?)?;
    let mut results = json!({
        "dim": field.dim(),
        "defect_max": defect.max_abs(),
        "hessian_trace_max": trace.max_abs(),
        "lagrangian_residual": lagrangian,
        "linearization": sl_graph::linearization_check(&field, &a.t)?,
    });
    if a.full {
        results["defect"] = to_value(&defect);
    }
    Outcome::ok(results, json!({ "m3_cross_check": 1e-10 }), Command::SLGRAPH_FORMULA)
}

fn run_decay(a: &args::DecayArgs) -> Result<Outcome> {
    let series = decay::DecaySeries::from_csv(&io::read_text(&a.csv)?)?;
    let set = match (&a.spectrum, a.m) {
        (Some(path), Some(m)) => Some(indicial::exceptional_set(&io::read_spectrum(path)?, m, 2.0 - m as f64 - 3.0, 3.0)?),
        (None, None) => None,
        _ => return Err(Error::InvalidInput("--spectrum and --m go together".into())),
    };
    let tolerances = json!({ "margin": a.threshold });
    match decay::classify_decay(&series, set.as_ref(), a.threshold) {
        Ok(c) => Outcome::ok(to_value(&c), tolerances, Command::DECAY_FORMULA),
        Err(e @ Error::Indeterminate { .. }) => Ok(Outcome {
            results: json!({
                "power": decay::fit_decay(&series, decay::DecayModel::Power),
                "logpower": decay::fit_decay(&series, decay::DecayModel::Logpower),
            }),
            tolerances,
            formula: Command::DECAY_FORMULA,
            error: Some(e),
        }),
        Err(e) => Err(e),
    }
}

/// Sizes the global rayon pool from `CONECALC_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("CONECALC_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("CONECALC_THREADS={raw} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
}

/// Loads a spectrum given as a bare table or as a report whose results hold one.
pub fn spectrum_from_json(text: &str) -> Result<SpectrumTable> {
    io::spectrum_from_json(text)
}
