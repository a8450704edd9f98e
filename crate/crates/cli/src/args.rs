use clap::{Args, Parser, Subcommand, ValueEnum};
use conecalc::indicial::Convention;

#[derive(Debug, Parser)]
#[command(name = "conecalc", version, about = "Spectral and weighted Fredholm calculus of cone links")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Link spectrum: analytic sphere or Clifford torus, or finite elements on a mesh.
    Spectrum(SpectrumArgs),
    /// Fredholm verdict, windows and index for weights at one or more cones.
    Weights(WeightsArgs),
    /// Conical and asymptotically conical rate calculus.
    Rate(RateArgs),
    /// Rigidity count at the eigenvalue 2m.
    Rigidity(RigidityArgs),
    /// Radial mode problem with Robin branch selection.
    Solve(SolveArgs),
    /// Weighted norms on a cone annulus.
    Norm(NormArgs),
    /// Special Lagrangian graph defect and its linearization.
    Slgraph(SlgraphArgs),
    /// Power against log-power decay classification.
    Decay(DecayArgs),
}

impl Command {
    pub const SPHERE_FORMULA: &'static str =
        "sphere spectrum: eigenvalue k(k+m-2) with multiplicity dim of degree-k harmonic polynomials";
    pub const TORUS_FORMULA: &'static str = "flat torus spectrum: eigenvalues 4 pi^2 |v|^2 over dual lattice vectors v";
    pub const FEM_FORMULA: &'static str = "cotangent stiffness against lumped mass, generalized eigenproblem K v = lambda M v";
    pub const CONICAL_INDEX_FORMULA: &'static str = "conical index: -sum_i N(beta_i), growth counts of indicial roots";
    pub const AC_INDEX_FORMULA: &'static str = "asymptotically conical index: +N(beta), growth count of indicial roots";
    pub const RATE_FORMULA: &'static str =
        "rate admissibility: no exceptional weight in (2, mu]; bootstrap mu -> min(3, 2 mu - 2)";
    pub const RIGIDITY_FORMULA: &'static str = "rigidity: multiplicity of eigenvalue 2m equals m^2 - 1 - dim G";
    pub const SOLVE_FORMULA: &'static str = "radial mode equation -f'' - (m-1) f'/r + lambda f/r^2 = g in t = log r";
    pub const NORM_FORMULA: &'static str = "weighted norm: sum_j || rho^(j-beta) |nabla^j f| ||_p over the annulus";
    pub const SLGRAPH_FORMULA: &'static str = "graph defect F = Im det(I + i Hess A), linearization t tr Hess A";
    pub const DECAY_FORMULA: &'static str = "least squares: log y vs log r (power), log y - log r vs log|log r| (logpower)";

    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Weights(_) => "weights",
            Command::Rate(_) => "rate",
            Command::Rigidity(_) => "rigidity",
            Command::Solve(_) => "solve",
            Command::Norm(_) => "norm",
            Command::Slgraph(_) => "slgraph",
            Command::Decay(_) => "decay",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            Command::Spectrum(a) if a.source.sphere.is_some() => Self::SPHERE_FORMULA,
            Command::Spectrum(a) if a.source.clifford.is_some() => Self::TORUS_FORMULA,
            Command::Spectrum(_) => Self::FEM_FORMULA,
            Command::Weights(a) if a.convention == ConventionArg::Ac => Self::AC_INDEX_FORMULA,
            Command::Weights(_) => Self::CONICAL_INDEX_FORMULA,
            Command::Rate(_) => Self::RATE_FORMULA,
            Command::Rigidity(_) => Self::RIGIDITY_FORMULA,
            Command::Solve(_) => Self::SOLVE_FORMULA,
            Command::Norm(_) => Self::NORM_FORMULA,
            Command::Slgraph(_) => Self::SLGRAPH_FORMULA,
            Command::Decay(_) => Self::DECAY_FORMULA,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpectrumSource {
    /// Round sphere link of the cone R^m.
    #[arg(long, value_name = "M")]
    pub sphere: Option<usize>,
    /// Clifford torus link of the cone in C^m.
    #[arg(long, value_name = "M")]
    pub clifford: Option<usize>,
    /// Closed triangulated surface in OFF format.
    #[arg(long)]
    pub mesh: Option<String>,
    /// Built-in icosphere at this subdivision level.
    #[arg(long, value_name = "LEVEL")]
    pub icosphere: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SpectrumSource,
    #[arg(long, default_value_t = 4)]
    pub degree_max: usize,
    #[arg(long, default_value_t = 20.0)]
    pub lambda_max: f64,
    /// Number of finite element eigenpairs.
    #[arg(long, default_value_t = 16)]
    pub count: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Relative tolerance for merging eigenvalues into one multiplicity.
    #[arg(long, default_value_t = conecalc::spectrum::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Conical,
    Ac,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Conical => Convention::Conical,
            ConventionArg::Ac => Convention::Ac,
        }
    }
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    /// Spectrum JSON; repeat once per cone, or give one for all.
    #[arg(long, required = true)]
    pub spectrum: Vec<String>,
    #[arg(long)]
    pub m: usize,
    /// Weight at each cone.
    #[arg(long, required = true, allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Conical)]
    pub convention: ConventionArg,
    /// Lower end of the certified root range (default: min(beta, 0) - 2).
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    /// Upper end of the certified root range (default: max(beta, 0) + 2).
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub spectrum: String,
    #[arg(long)]
    pub m: usize,
    /// Conical rate in (2, 3) to test for admissibility.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Admissible seed rate for the bootstrap trace.
    #[arg(long)]
    pub bootstrap: Option<f64>,
    /// Asymptotically conical rate below 2.
    #[arg(long, allow_negative_numbers = true)]
    pub ac_rate: Option<f64>,
    /// The obstruction class of the asymptotically conical end is nonzero.
    #[arg(long)]
    pub obstructed: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "rigidity_source", required = true, multiple = false, args = ["sphere", "clifford", "spectrum"])]
pub struct RigidityArgs {
    #[arg(long, value_name = "M")]
    pub sphere: Option<usize>,
    #[arg(long, value_name = "M")]
    pub clifford: Option<usize>,
    #[arg(long)]
    pub spectrum: Option<String>,
    /// Cone dimension for --spectrum.
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension of the stabilizer subgroup of SU(m).
    #[arg(long)]
    pub dim_g: Option<usize>,
    /// Relative tolerance for matching the eigenvalue 2m.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub m: usize,
    /// Link eigenvalue of the mode.
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub r0: f64,
    #[arg(long)]
    pub r1: f64,
    /// Inner branch: plus, minus or an exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub inner: String,
    /// Outer branch: plus, minus or an exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub outer: String,
    #[arg(long, allow_negative_numbers = true)]
    pub rhs_coeff: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rhs_exponent: Option<f64>,
    /// Prescribed value at r1.
    #[arg(long, allow_negative_numbers = true)]
    pub value: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Link mesh (OFF); the annulus is radial-major over its vertices.
    #[arg(long)]
    pub mesh: Option<String>,
    /// Round sphere link of R^m, one link sample per shell.
    #[arg(long, value_name = "M")]
    pub sphere_link: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    /// Odd number of log-spaced shells.
    #[arg(long, default_value_t = 401)]
    pub shells: usize,
    /// JSON field {values, grad_norm?, hess_norm?}.
    #[arg(long)]
    pub field: Option<String>,
    /// Little-endian f64 values, radial-major.
    #[arg(long)]
    pub field_bin: Option<String>,
    /// Sample the radial field r^e.
    #[arg(long, allow_negative_numbers = true)]
    pub power: Option<f64>,
    /// Integrability exponent, or `inf`.
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Pair the field with the radial field r^e.
    #[arg(long, allow_negative_numbers = true)]
    pub pair_power: Option<f64>,
    /// Conjugate exponent for the pairing.
    #[arg(long)]
    pub q: Option<String>,
}

#[derive(Debug, Args)]
pub struct SlgraphArgs {
    /// Grid field as JSON {lo, shape, spacing, values} or binary with a text header.
    #[arg(long)]
    pub field: Option<String>,
    /// Diagonal quadratic A = sum c_i x_i^2 / 2 on [-1, 1]^m.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub diag: Option<Vec<f64>>,
    #[arg(long, default_value_t = 33)]
    pub points: usize,
    /// Scalings for the linearization check.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3])]
    pub t: Vec<f64>,
    /// Include the interior defect grid.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    /// CSV file of `r,y` lines.
    #[arg(long)]
    pub csv: String,
    /// Link spectrum for the rate admissibility check.
    #[arg(long)]
    pub spectrum: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Residual ratio required for a verdict.
    #[arg(long, default_value_t = conecalc::decay::DEFAULT_MARGIN)]
    pub threshold: f64,
}
