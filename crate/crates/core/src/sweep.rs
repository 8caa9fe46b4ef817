//! Condition-number sweeps over a range of degrees.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::format::sig17;
use crate::polynomial::{mu_norm_coeff, ConditionReport, Method, DEFAULT_PRECISION_BITS};
use crate::quadrature::{default_grid_size, mu_norm_spherical, sphere_grid};
use crate::Construction;

pub const CSV_HEADER: &str = "N,M,mu_max,mu_over_sqrtN,method,grid_L,grid_K,elapsed_s";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub mu_max: f64,
    pub mu_over_sqrt_n: f64,
    pub method: Method,
    /// Zero for the coefficient method.
    pub grid_l: usize,
    pub grid_k: usize,
    pub elapsed_s: f64,
}

impl SweepRow {
    pub fn from_report(m: usize, report: &ConditionReport) -> Self {
        Self {
            n: report.degree,
            m,
            mu_max: report.mu_max,
            mu_over_sqrt_n: report.mu_over_sqrt_n,
            method: report.method,
            grid_l: report.parameters.grid_l.unwrap_or(0),
            grid_k: report.parameters.grid_k.unwrap_or(0),
            elapsed_s: report.elapsed,
        }
    }

    fn record(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.m.to_string(),
            sig17(self.mu_max),
            sig17(self.mu_over_sqrt_n),
            self.method.tag().to_owned(),
            self.grid_l.to_string(),
            self.grid_k.to_string(),
            sig17(self.elapsed_s),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub from: usize,
    pub to: usize,
    pub step: usize,
    pub method: Method,
    /// Overrides the default `(L, K)` of the spherical method.
    pub grid: Option<(usize, usize)>,
    pub precision_bits: usize,
}

impl SweepConfig {
    pub fn new(from: usize, to: usize, step: usize, method: Method) -> Self {
        Self {
            from,
            to,
            step,
            method,
            grid: None,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> {
        (self.from..=self.to).step_by(self.step.max(1))
    }
}

/// One condition-number evaluation of the default construction.
pub fn evaluate(
    n: usize,
    method: Method,
    grid: Option<(usize, usize)>,
    precision_bits: usize,
) -> Result<(Construction, ConditionReport)> {
    let c = Construction::erres(n as i64)?;
    let report = match method {
        Method::Coefficient => mu_norm_coeff(&c.polynomial, precision_bits)?,
        Method::Spherical => {
            let (l, k) = grid.unwrap_or_else(|| default_grid_size(n));
            mu_norm_spherical(&c.points, &sphere_grid(l, k)?)?
        }
    };
    Ok((c, report))
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.from < 16 || config.to < config.from || config.step == 0 {
        return Err(Error::Domain {
            degree: config.from as i64,
            reason: "sweep needs 16 <= from <= to and step >= 1",
        });
    }
    config
        .degrees()
        .map(|n| {
            let started = Instant::now();
            let (c, report) = evaluate(n, config.method, config.grid, config.precision_bits)?;
            let mut row = SweepRow::from_report(c.partition.m(), &report);
            row.elapsed_s = started.elapsed().as_secs_f64();
            Ok(row)
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for r in rows {
        w.write_record(r.record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(String),
    #[error("row {row}: {reason}")]
    Field { row: usize, reason: String },
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CsvError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rd.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(CsvError::Header(header));
    }
    let mut rows = Vec::new();
    for (row, rec) in rd.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let bad = |reason: String| CsvError::Field { row, reason };
        let int = |i: usize| field(i).parse::<usize>().map_err(|e| bad(e.to_string()));
        let float = |i: usize| field(i).parse::<f64>().map_err(|e| bad(e.to_string()));
        let method = match field(4) {
            "coefficient" => Method::Coefficient,
            "spherical" => Method::Spherical,
            m => return Err(bad(format!("unknown method {m:?}"))),
        };
        rows.push(SweepRow {
            n: int(0)?,
            m: int(1)?,
            mu_max: float(2)?,
            mu_over_sqrt_n: float(3)?,
            method,
            grid_l: int(5)?,
            grid_k: int(6)?,
            elapsed_s: float(7)?,
        });
    }
    Ok(rows)
}

/// Degrees whose `M` exceeds that of the previous row.
pub fn m_increments(rows: &[SweepRow]) -> Vec<usize> {
    rows.windows(2)
        .filter(|w| w[1].m > w[0].m)
        .map(|w| w[1].n)
        .collect()
}

/// Degrees where `mu / sqrt(N)` is strictly above both neighbours.
pub fn local_maxima(rows: &[SweepRow]) -> Vec<usize> {
    rows.windows(3)
        .filter(|w| {
            w[1].mu_over_sqrt_n > w[0].mu_over_sqrt_n && w[1].mu_over_sqrt_n > w[2].mu_over_sqrt_n
        })
        .map(|w| w[1].n)
        .collect()
}
