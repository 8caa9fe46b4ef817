//! Logarithmic potentials on the sphere.
//!
//! The discrete potential `sum_i log |p - p_i|` of a well spread set tracks
//! the constant continuous potential `-kappa N` up to the logarithm of the
//! scaled distance to the nearest member. [`residual`] measures exactly that
//! gap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::sphere::{ProbeSampler, SpherePoint, SpherePointSet};

/// Distance below which [`residual`] switches to the excluded-member form.
pub const RESIDUAL_SWITCH: f64 = 1e-12;

/// Continuous logarithmic energy of the normalized surface measure,
/// `1/2 - log 2`.
pub fn kappa() -> f64 {
    0.5 - std::f64::consts::LN_2
}

/// Mean of `log |p - q|` over `q` on the parallel of height `h`, for `p` at
/// height `c`: `log(1 - hc + |h - c|) / 2`. Both heights lie in `[-1, 1]`.
pub fn fp(h: f64, c: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&h) && (-1.0..=1.0).contains(&c));
    0.5 * (1.0 - h * c + (h - c).abs()).ln()
}

/// Mean of `|p - q|^{-2}` over the parallel of height `h`: `1 / (2 |h - c|)`.
pub fn parallel_inverse_square(h: f64, c: f64) -> Result<f64> {
    if h == c {
        return Err(Error::Singular("point lies on the parallel"));
    }
    Ok(0.5 / (h - c).abs())
}

/// `sum_i log |p - p_i|`, `-inf` when `p` is a member.
pub fn log_potential(set: &SpherePointSet, p: &SpherePoint) -> f64 {
    set.points().iter().map(|q| p.dist(q).ln()).sum()
}

fn log_potential_excluding(set: &SpherePointSet, p: &SpherePoint, skip: usize) -> f64 {
    set.points()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .map(|(_, q)| p.dist(q).ln())
        .sum()
}

/// `sum_i log |p - p_i| + kappa N - log(sqrt(N) dist(p, P))`.
///
/// Within [`RESIDUAL_SWITCH`] of a member `p_i` the singular terms cancel
/// and the value is `sum_{j != i} log |p - p_j| + kappa N - log(N) / 2`.
pub fn residual(set: &SpherePointSet, p: &SpherePoint) -> f64 {
    let n = set.len() as f64;
    let (i, d) = set.nearest(p);
    if d > RESIDUAL_SWITCH {
        log_potential(set, p) + kappa() * n - (n.sqrt() * d).ln()
    } else {
        log_potential_excluding(set, p, i) + kappa() * n - 0.5 * n.ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    #[serde(rename = "N")]
    pub degree: usize,
    pub probe_count: usize,
    /// Extremes over the probes.
    #[serde(with = "format")]
    pub residual_min: f64,
    #[serde(with = "format")]
    pub residual_max: f64,
    #[serde(rename = "covering_sqrtN", with = "format")]
    pub covering_sqrt_n: f64,
    #[serde(rename = "separation_sqrtN", with = "format")]
    pub separation_sqrt_n: f64,
    /// Residual at each member.
    #[serde(with = "format::vec")]
    pub at_point_values: Vec<f64>,
}

impl ResidualReport {
    /// Largest `|residual|` over probes and members.
    pub fn max_abs(&self) -> f64 {
        self.at_point_values.iter().fold(
            self.residual_min.abs().max(self.residual_max.abs()),
            |a, v| a.max(v.abs()),
        )
    }
}

pub fn residual_survey(set: &SpherePointSet, sampler: ProbeSampler) -> Result<ResidualReport> {
    let probes = sampler.sample(set);
    let n = set.len() as f64;
    let values: Vec<f64> = probes.par_iter().map(|q| residual(set, q)).collect();
    let at_point_values: Vec<f64> = set.points().par_iter().map(|q| residual(set, q)).collect();
    let (residual_min, residual_max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(ResidualReport {
        degree: set.len(),
        probe_count: probes.len(),
        residual_min,
        residual_max,
        covering_sqrt_n: set.covering(&probes) * n.sqrt(),
        separation_sqrt_n: set.separation()? * n.sqrt(),
        at_point_values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "N")]
    pub degree: usize,
    /// `sum_{i != j} log(1 / |p_i - p_j|)` over ordered pairs.
    #[serde(with = "format")]
    pub energy: f64,
    /// `(energy - kappa N^2 + N log(N) / 2) / N`.
    #[serde(with = "format")]
    pub deficit: f64,
    #[serde(with = "format")]
    pub kappa: f64,
}

/// Logarithmic energy over ordered pairs; halve it for the `i < j` convention.
pub fn log_energy(set: &SpherePointSet) -> Result<EnergyReport> {
    let pts = set.points();
    if pts.len() < 2 {
        return Err(Error::TooFewPoints {
            got: pts.len(),
            min: 2,
        });
    }
    let rows: Vec<Result<f64>> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for (j, q) in pts.iter().enumerate().skip(i + 1) {
                let d = pts[i].dist(q);
                if d == 0.0 {
                    return Err(Error::CoincidentPoints(i, j));
                }
                acc -= d.ln();
            }
            Ok(acc)
        })
        .collect();
    let mut half = 0.0;
    for r in rows {
        half += r?;
    }
    let energy = 2.0 * half;
    let n = pts.len() as f64;
    let kappa = kappa();
    Ok(EnergyReport {
        degree: pts.len(),
        energy,
        deficit: (energy - kappa * n * n + 0.5 * n * n.ln()) / n,
        kappa,
    })
}
