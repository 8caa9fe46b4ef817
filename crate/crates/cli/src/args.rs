use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Builds explicit polynomials with normalized condition number of order
/// sqrt(N) and runs the numerical experiments around them.
///
/// Every flag can also be set through a CONDPOLY_* environment variable;
/// flags take precedence.
#[derive(Debug, Parser)]
#[command(name = "condpoly", version)]
pub struct Cli {
    /// Accepted for compatibility; every sampler is already deterministic.
    #[arg(long, global = true, env = "CONDPOLY_SEEDLESS")]
    pub seedless: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the point set and the factored polynomial as JSON.
    Construct(ConstructArgs),
    /// Normalized condition number of one construction.
    Mu(MuArgs),
    /// mu over a range of degrees, as CSV.
    Sweep(SweepArgs),
    /// Survey of the potential residual over deterministic probes.
    Residual(ResidualArgs),
    /// Logarithmic energy and its deficit per point.
    Energy(EnergyArgs),
    /// Run the invariant suites; exits 0 only if every group passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Polynomial degree N.
    #[arg(long, env = "CONDPOLY_DEGREE")]
    pub degree: i64,

    /// JSON decomposition `[r_1, ..., r_M]` or `{"r": [...], "c1": [p, q], "c2": [p, q]}`
    /// used instead of the default one.
    #[arg(long, env = "CONDPOLY_PARTITION_FILE")]
    pub partition_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub source: Source,

    /// Output directory for points-N.json and polynomial-N.json.
    #[arg(long, env = "CONDPOLY_OUT", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Spherical,
    Coeff,
    Both,
}

/// `LxK`, latitude by longitude nodes.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (l, k) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected LxK, got {s:?}"))?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(l)?, num(k)?))
}

#[derive(Debug, Args)]
pub struct Numerics {
    /// Spherical quadrature grid LxK [default: max(64, 2N) x max(64, 2N)].
    #[arg(long, env = "CONDPOLY_GRID", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,

    /// Working precision of the coefficient expansion, in bits.
    #[arg(long, env = "CONDPOLY_PRECISION_BITS", default_value_t = condpoly::polynomial::DEFAULT_PRECISION_BITS)]
    pub precision_bits: usize,
}

#[derive(Debug, Args)]
pub struct MuArgs {
    #[command(flatten)]
    pub source: Source,

    /// Spherical quadrature, coefficient Weyl norm, or both with their discrepancy.
    #[arg(long, env = "CONDPOLY_METHOD", value_enum, default_value_t = MethodArg::Spherical)]
    pub method: MethodArg,

    #[command(flatten)]
    pub numerics: Numerics,

    /// Use z^N - 1 instead of the construction (any N >= 1).
    #[arg(long, env = "CONDPOLY_UNIT_ROOTS")]
    pub unit_roots: bool,

    /// Write the JSON report here instead of standard output.
    #[arg(long, env = "CONDPOLY_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, env = "CONDPOLY_FROM", default_value_t = 16)]
    pub from: usize,

    #[arg(long, env = "CONDPOLY_TO", default_value_t = 256)]
    pub to: usize,

    #[arg(long, env = "CONDPOLY_STEP", default_value_t = 4)]
    pub step: usize,

    /// Condition-number route; `both` is not accepted here.
    #[arg(long, env = "CONDPOLY_METHOD", value_enum, default_value_t = MethodArg::Coeff)]
    pub method: MethodArg,

    #[command(flatten)]
    pub numerics: Numerics,

    /// Write the CSV here instead of standard output.
    #[arg(long, env = "CONDPOLY_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub target: Target,

    /// Number of spiral probes; chord midpoints of the set are added.
    #[arg(long, env = "CONDPOLY_PROBES", default_value_t = 10_000)]
    pub probes: usize,

    #[arg(long, env = "CONDPOLY_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub target: Target,

    #[arg(long, env = "CONDPOLY_OUT")]
    pub out: Option<PathBuf>,
}

/// A construction, or a point set read from a `construct` output file.
#[derive(Debug, Args)]
pub struct Target {
    #[arg(long, env = "CONDPOLY_DEGREE", required_unless_present = "points_file")]
    pub degree: Option<i64>,

    #[arg(long, env = "CONDPOLY_PARTITION_FILE", conflicts_with = "points_file")]
    pub partition_file: Option<PathBuf>,

    /// Point set JSON as written by `construct`.
    #[arg(long, env = "CONDPOLY_POINTS_FILE")]
    pub points_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Degrees to check.
    #[arg(num_args = 0.., default_values_t = [16])]
    pub degrees: Vec<i64>,

    /// Check a point set file instead of the default constructions.
    #[arg(long, env = "CONDPOLY_POINTS_FILE")]
    pub points_file: Option<PathBuf>,
}
