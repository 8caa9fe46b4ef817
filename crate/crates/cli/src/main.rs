mod args;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, MethodArg, Source, Target};
use condpoly::io::{FactoredPolynomialFile, PartitionFile, PointSetFile};
use condpoly::polynomial::roots;
use condpoly::quadrature::default_grid_size;
use condpoly::sweep::{local_maxima, m_increments, run_sweep, to_csv, SweepConfig};
use condpoly::verify::{verify_degree, verify_point_set, VerifySummary};
use condpoly::{
    format, log_energy, mu_norm_coeff, residual_survey, sphere_grid, stereo_to_sphere,
    ConditionReport, Construction, Error, FactoredPolynomial, Method, ProbeSampler, SpherePointSet,
};

/// Failure classes with their exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Validation(m) | Self::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular(_) | Error::CoincidentPoints(..) | Error::RepeatedRoot(..) => {
                Self::Numerical(e.to_string())
            }
            _ => Self::Validation(e.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Validation(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

/// Writes to `out`, or to standard output when absent.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Validation(format!("stdout: {e}"))),
    }
}

fn build(source: &Source) -> Outcome<Construction> {
    match &source.partition_file {
        None => Ok(Construction::erres(source.degree)?),
        Some(path) => {
            let file: PartitionFile = read_json(path)?;
            Ok(Construction::from_partition(
                file.to_partition(source.degree)?,
            ))
        }
    }
}

fn load_target(t: &Target) -> Outcome<SpherePointSet> {
    match (&t.points_file, t.degree) {
        (Some(path), _) => Ok(read_json::<PointSetFile>(path)?.to_point_set()),
        (None, Some(degree)) => Ok(build(&Source {
            degree,
            partition_file: t.partition_file.clone(),
        })?
        .points),
        (None, None) => Err(Failure::Usage(
            "either --degree or --points-file is required".into(),
        )),
    }
}

fn construct(a: &args::ConstructArgs) -> Outcome {
    let c = build(&a.source)?;
    fs::create_dir_all(&a.out).map_err(|e| io_error(&a.out, e))?;
    let n = c.degree();
    let points = a.out.join(format!("points-{n}.json"));
    let poly = a.out.join(format!("polynomial-{n}.json"));
    emit(
        Some(&points),
        &to_json(&PointSetFile::from_construction(&c)),
    )?;
    emit(
        Some(&poly),
        &to_json(&FactoredPolynomialFile::from_polynomial(&c.polynomial)),
    )?;
    eprintln!("wrote {} and {}", points.display(), poly.display());
    Ok(())
}

#[derive(Serialize)]
struct BothReport {
    #[serde(rename = "N")]
    degree: usize,
    coefficient: ConditionReport,
    spherical: ConditionReport,
    /// `|mu_sph - mu_coeff| / mu_coeff` of the maxima.
    #[serde(with = "format")]
    relative_discrepancy: f64,
}

fn mu(a: &args::MuArgs) -> Outcome {
    let (poly, points) = if a.unit_roots {
        if a.source.degree < 1 {
            return Err(Failure::Validation("--unit-roots needs N >= 1".into()));
        }
        let p = FactoredPolynomial::unit_roots(a.source.degree as usize);
        let pts = roots(&p)
            .roots
            .iter()
            .map(|&w| stereo_to_sphere(w))
            .collect();
        (p, SpherePointSet::from_points(pts))
    } else {
        let c = build(&a.source)?;
        (c.polynomial, c.points)
    };
    let n = points.len();
    let spherical = || -> Outcome<ConditionReport> {
        let (l, k) = a.numerics.grid.unwrap_or_else(|| default_grid_size(n));
        Ok(condpoly::mu_norm_spherical(&points, &sphere_grid(l, k)?)?)
    };
    let coeff =
        || -> Outcome<ConditionReport> { Ok(mu_norm_coeff(&poly, a.numerics.precision_bits)?) };
    let text = match a.method {
        MethodArg::Spherical => to_json(&spherical()?),
        MethodArg::Coeff => to_json(&coeff()?),
        MethodArg::Both => {
            let (c, s) = (coeff()?, spherical()?);
            let relative_discrepancy = (s.mu_max - c.mu_max).abs() / c.mu_max;
            to_json(&BothReport {
                degree: n,
                coefficient: c,
                spherical: s,
                relative_discrepancy,
            })
        }
    };
    emit(a.out.as_deref(), &text)
}

fn sweep(a: &args::SweepArgs) -> Outcome {
    if a.from < 16 || a.to < a.from || a.step == 0 {
        return Err(Failure::Usage(format!(
            "sweep needs 16 <= from <= to and step >= 1, got {}..{} step {}",
            a.from, a.to, a.step
        )));
    }
    let method = match a.method {
        MethodArg::Coeff => Method::Coefficient,
        MethodArg::Spherical => Method::Spherical,
        MethodArg::Both => return Err(Failure::Usage("sweep takes one method".into())),
    };
    let mut config = SweepConfig::new(a.from, a.to, a.step, method);
    config.grid = a.numerics.grid;
    config.precision_bits = a.numerics.precision_bits;
    let rows = run_sweep(&config)?;
    eprintln!("M increments at N = {:?}", m_increments(&rows));
    eprintln!("local maxima of mu/sqrtN at N = {:?}", local_maxima(&rows));
    emit(a.out.as_deref(), &to_csv(&rows))
}

fn residual(a: &args::ResidualArgs) -> Outcome {
    let set = load_target(&a.target)?;
    let report = residual_survey(&set, ProbeSampler::SpiralWithMidpoints(a.probes))?;
    emit(a.out.as_deref(), &to_json(&report))
}

fn energy(a: &args::EnergyArgs) -> Outcome {
    let set = load_target(&a.target)?;
    emit(a.out.as_deref(), &to_json(&log_energy(&set)?))
}

#[derive(Serialize)]
struct SummaryLine {
    #[serde(rename = "N")]
    degree: usize,
    pass: bool,
    groups: usize,
}

/// One JSON line per group, then one summary line.
fn print_summary(s: &VerifySummary) {
    for g in &s.groups {
        println!("{}", serde_json::to_string(g).expect("serializable"));
    }
    let line = SummaryLine {
        degree: s.degree,
        pass: s.pass,
        groups: s.groups.len(),
    };
    println!("{}", serde_json::to_string(&line).expect("serializable"));
}

fn verify(a: &args::VerifyArgs) -> Outcome {
    let summaries = match &a.points_file {
        Some(path) => vec![verify_point_set(
            &read_json::<PointSetFile>(path)?.to_point_set(),
        )?],
        None => a
            .degrees
            .iter()
            .map(|&n| verify_degree(n))
            .collect::<Result<Vec<_>, _>>()?,
    };
    summaries.iter().for_each(print_summary);
    let failed: Vec<usize> = summaries
        .iter()
        .filter(|s| !s.pass)
        .map(|s| s.degree)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "invariant failures for N = {failed:?}"
        )))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Mu(a) => mu(a),
        Command::Sweep(a) => sweep(a),
        Command::Residual(a) => residual(a),
        Command::Energy(a) => energy(a),
        Command::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
