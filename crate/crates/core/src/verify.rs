//! Invariant suites grouped by module, with frozen empirical constants.
//!
//! [`verify_degree`] checks the default construction of one degree;
//! [`verify_point_set`] runs the groups that only need points.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::partition::{layout, partition_custom};
use crate::polynomial::{mu_norm_coeff, roots, DEFAULT_PRECISION_BITS, REPEATED_ROOT_TOL};
use crate::potential::{kappa, log_energy, residual, residual_survey};
use crate::quadrature::{
    default_grid_size, gauss_legendre, mu_norm_spherical, scaled_log_integrand, sphere_grid,
    SCALED_INTEGRAND_BOUND,
};
use crate::sphere::{stereo_to_plane, stereo_to_sphere, ProbeSampler, SpherePointSet};
use crate::Construction;

/// `separation * sqrt(N)` over `16 <= N <= 1024` lies in `[1.015, 1.090]`.
pub const SEPARATION_WINDOW: (f64, f64) = (0.9, 1.2);
/// Probe estimate of `covering * sqrt(N)` over the same range lies in
/// `[2.85, 3.76]`.
pub const COVERING_WINDOW: (f64, f64) = (2.5, 4.0);
/// Largest `|residual|` seen is 3.55, at `N = 1024`.
pub const RESIDUAL_BOUND: f64 = 4.0;
/// Energy deficit per point ranges over `[0.196, 0.740]` for `16 <= N <= 1024`.
pub const DEFICIT_WINDOW: (f64, f64) = (0.0, 1.0);
/// `mu / sqrt(N)` never drops below 1.29 on `16..=256`.
pub const MU_LOWER_BOUND: f64 = 0.2;
/// Relative tolerance between the two condition-number routes.
pub const CROSS_METHOD_TOL: f64 = 5e-3;
/// Degrees above this skip the spherical cross-check.
pub const CROSS_METHOD_MAX_DEGREE: usize = 256;
pub const PROBE_COUNT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    #[serde(rename = "N")]
    pub degree: usize,
    pub group: String,
    pub pass: bool,
    /// Failed checks, or a short summary of the measured values.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    #[serde(rename = "N")]
    pub degree: usize,
    pub pass: bool,
    pub groups: Vec<GroupResult>,
}

impl VerifySummary {
    fn new(degree: usize, groups: Vec<GroupResult>) -> Self {
        Self {
            degree,
            pass: groups.iter().all(|g| g.pass),
            groups,
        }
    }
}

/// Accumulates named checks for one group.
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, degree: usize, group: &str) -> GroupResult {
        let pass = self.failures.is_empty();
        let detail = if pass {
            self.notes.join("; ")
        } else {
            format!("failed: {}", self.failures.join("; "))
        };
        GroupResult {
            degree,
            group: group.to_owned(),
            pass,
            detail,
        }
    }
}

fn within(v: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&v)
}

fn partition_group(c: &Construction) -> GroupResult {
    let p = &c.partition;
    let n = p.degree();
    let m = p.m();
    let mut k = Checks::new();
    let (c1, c2) = p.growth_bounds();
    k.check(
        partition_custom(n, p.half_counts(), c1, c2).is_ok(),
        "hypotheses rejected on revalidation",
    );
    let band_sum: i64 = (1..=p.band_count()).map(|j| p.r(j)).sum();
    k.check(band_sum == n, format!("band sum {band_sum} != {n}"));
    for j in 1..=p.band_count() {
        k.check(
            p.r(j) == p.r(p.band_count() + 1 - j),
            format!("band {j} not mirrored"),
        );
        k.check(
            p.r(j) == 6 * p.s(j) + p.rem(j) || j == 1 || j == p.band_count(),
            format!("band {j} split"),
        );
    }
    k.note(format!("M={m} bands={}", p.band_count()));
    k.finish(c.degree(), "partition")
}

fn layout_group(c: &Construction) -> GroupResult {
    let l = &c.layout;
    let pars = l.parallels();
    let mut k = Checks::new();
    k.check(l.total_points() == c.degree(), "point count");
    k.check(layout(&c.partition) == *l, "layout not reproducible");
    k.check(
        pars.windows(2).all(|w| w[0].height > w[1].height),
        "heights not strictly decreasing",
    );
    k.check(
        pars.iter()
            .all(|p| p.height.numer().abs() < *p.height.denom() && p.count > 0),
        "parallel outside (-1, 1) or empty",
    );
    let mirrored = pars
        .iter()
        .zip(pars.iter().rev())
        .all(|(a, b)| a.height == -b.height && a.count == b.count);
    k.check(mirrored, "layout not symmetric about the equator");
    k.note(format!("{} parallels", pars.len()));
    k.finish(c.degree(), "layout")
}

/// Geometry checks shared by constructed and supplied sets.
fn geometry_checks(set: &SpherePointSet, k: &mut Checks, probes: &[crate::SpherePoint]) {
    let n = set.len();
    let sq = (n as f64).sqrt();
    k.check(
        set.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-14),
        "point off the unit sphere",
    );
    match set.separation() {
        Ok(s) => {
            k.check(s > 0.0, "coincident points");
            k.check(
                within(s * sq, SEPARATION_WINDOW),
                format!(
                    "separation*sqrtN {:.4} outside {:?}",
                    s * sq,
                    SEPARATION_WINDOW
                ),
            );
            k.note(format!("separation*sqrtN={:.4}", s * sq));
        }
        Err(e) => k.check(false, e.to_string()),
    }
    let cov = set.covering(probes) * sq;
    k.check(
        within(cov, COVERING_WINDOW),
        format!("covering*sqrtN {cov:.4} outside {COVERING_WINDOW:?}"),
    );
    k.note(format!("covering*sqrtN={cov:.4}"));
}

fn sphere_group(c: &Construction, probes: &[crate::SpherePoint]) -> GroupResult {
    let set = &c.points;
    let mut k = Checks::new();
    geometry_checks(set, &mut k, probes);
    let heights_ok = set
        .points()
        .iter()
        .enumerate()
        .all(|(i, p)| p.z == c.layout.parallels()[set.parallel_of(i)].height_f64());
    k.check(heights_ok, "point heights differ from the layout");
    let round_trip = set
        .points()
        .iter()
        .all(|p| match stereo_to_plane(p).finite() {
            Some(w) => stereo_to_sphere(w).dist(p) < 1e-12,
            None => true,
        });
    k.check(round_trip, "stereographic round trip");
    let matched = roots(&c.polynomial)
        .roots
        .iter()
        .all(|w| set.nearest(&stereo_to_sphere(*w)).1 < 1e-12);
    k.check(matched, "roots do not project onto the points");
    k.finish(set.len(), "sphere")
}

fn polynomial_group(c: &Construction) -> Result<GroupResult> {
    let n = c.degree();
    let mut k = Checks::new();
    k.check(c.polynomial.degree() == n, "degree");
    let mut moduli: Vec<(usize, f64)> = c.polynomial.factors().iter().map(|f| (f.k, f.m)).collect();
    moduli.sort_by(|a, b| a.1.total_cmp(&b.1));
    k.check(
        moduli
            .windows(2)
            .all(|w| w[1].1 - w[0].1 > REPEATED_ROOT_TOL * w[1].1),
        "two factors share a modulus",
    );
    let coeff = mu_norm_coeff(&c.polynomial, DEFAULT_PRECISION_BITS)?;
    k.check(coeff.mu_max.is_finite(), "mu is not finite");
    k.check(
        coeff.mu_over_sqrt_n >= MU_LOWER_BOUND,
        format!(
            "mu/sqrtN {:.4} below {MU_LOWER_BOUND}",
            coeff.mu_over_sqrt_n
        ),
    );
    k.note(format!("mu/sqrtN={:.6}", coeff.mu_over_sqrt_n));
    if n <= CROSS_METHOD_MAX_DEGREE {
        let sph = c.mu_spherical()?;
        let rel = (sph.mu_max - coeff.mu_max).abs() / coeff.mu_max;
        k.check(
            rel <= CROSS_METHOD_TOL,
            format!("methods differ by {rel:.3e}"),
        );
        k.note(format!("cross-method rel={rel:.3e}"));
    }
    Ok(k.finish(n, "polynomial"))
}

fn residual_group(set: &SpherePointSet, reference: Option<&SpherePointSet>) -> Result<GroupResult> {
    let mut k = Checks::new();
    let report = residual_survey(set, ProbeSampler::SpiralWithMidpoints(PROBE_COUNT))?;
    let worst = report.max_abs();
    k.check(
        worst.is_finite() && worst <= RESIDUAL_BOUND,
        format!("max|residual| {worst:.4} above {RESIDUAL_BOUND}"),
    );
    match reference {
        // the construction is symmetric under z -> -z
        None => {
            let asym = crate::sphere::spiral_probes(1000)
                .iter()
                .map(|q| (residual(set, q) - residual(set, &q.mirrored())).abs())
                .fold(0.0, f64::max);
            k.check(
                asym < 1e-9,
                format!("residual not mirror symmetric ({asym:.3e})"),
            );
        }
        // member residuals depend only on pairwise distances, so they are
        // unchanged by rigid motions
        Some(r) => {
            let sorted = |s: &SpherePointSet| {
                let mut v: Vec<f64> = s.points().iter().map(|q| residual(s, q)).collect();
                v.sort_by(f64::total_cmp);
                v
            };
            let gap = sorted(set)
                .iter()
                .zip(sorted(r))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            k.check(
                gap < 1e-9,
                format!("member residuals differ from the construction by {gap:.3e}"),
            );
        }
    }
    k.note(format!(
        "max|residual|={worst:.4} over {} probes",
        report.probe_count + set.len()
    ));
    Ok(k.finish(set.len(), "residual"))
}

fn energy_group(set: &SpherePointSet) -> Result<GroupResult> {
    let mut k = Checks::new();
    let report = log_energy(set)?;
    let pts = set.points();
    let mut direct = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if i != j {
                direct -= p.dist(q).ln();
            }
        }
    }
    let rel = (direct - report.energy).abs() / report.energy.abs().max(1.0);
    k.check(
        rel < 1e-9,
        format!("energy differs from the pair sum by {rel:.3e}"),
    );
    k.check(
        within(report.deficit, DEFICIT_WINDOW),
        format!("deficit {:.4} outside {DEFICIT_WINDOW:?}", report.deficit),
    );
    k.check(report.kappa == kappa(), "kappa");
    k.note(format!("deficit={:.4}", report.deficit));
    Ok(k.finish(set.len(), "energy"))
}

fn quadrature_group(set: &SpherePointSet) -> Result<GroupResult> {
    let n = set.len();
    let mut k = Checks::new();
    let (l, kk) = default_grid_size(n);
    let w: f64 = gauss_legendre(l).iter().map(|p| p.1).sum();
    k.check((w - 2.0).abs() < 1e-13, "latitude weights do not sum to 2");
    // a coarser grid keeps large degrees cheap; the bound is pointwise
    let grid = if n <= CROSS_METHOD_MAX_DEGREE {
        sphere_grid(l, kk)?
    } else {
        sphere_grid(256, 256)?
    };
    k.check((grid.integrate(|_| 1.0) - 1.0).abs() < 1e-14, "total mass");
    k.check(
        (grid.integrate(|q| q.z * q.z) - 1.0 / 3.0).abs() < 1e-13,
        "second moment",
    );
    let mut peak = f64::NEG_INFINITY;
    for row in 0..grid.latitude_count() {
        for (q, _) in grid.row(row) {
            peak = peak.max(scaled_log_integrand(set, &q));
        }
    }
    let peak = peak.exp();
    k.check(
        peak <= SCALED_INTEGRAND_BOUND,
        format!("max exp(G) {peak:.4} above {SCALED_INTEGRAND_BOUND}"),
    );
    k.note(format!("max exp(G)={peak:.4}"));
    if n <= CROSS_METHOD_MAX_DEGREE {
        let r = mu_norm_spherical(set, &grid)?;
        k.check(r.mu_max.is_finite(), "spherical mu is not finite");
    }
    Ok(k.finish(n, "quadrature"))
}

/// All groups for the default construction of degree `n`.
pub fn verify_degree(n: i64) -> Result<VerifySummary> {
    let c = Construction::erres(n)?;
    let probes = ProbeSampler::SpiralWithMidpoints(PROBE_COUNT).sample(&c.points);
    let groups = vec![
        partition_group(&c),
        layout_group(&c),
        sphere_group(&c, &probes),
        polynomial_group(&c)?,
        residual_group(&c.points, None)?,
        energy_group(&c.points)?,
        quadrature_group(&c.points)?,
    ];
    Ok(VerifySummary::new(c.degree(), groups))
}

/// Geometry, residual, energy and quadrature groups for a supplied set.
/// Sets whose size admits a default construction are also compared against
/// it, which detects moved points.
pub fn verify_point_set(set: &SpherePointSet) -> Result<VerifySummary> {
    let reference = Construction::erres(set.len() as i64).ok();
    let probes = ProbeSampler::SpiralWithMidpoints(PROBE_COUNT).sample(set);
    let mut k = Checks::new();
    geometry_checks(set, &mut k, &probes);
    let groups = vec![
        k.finish(set.len(), "sphere"),
        residual_group(set, reference.as_ref().map(|c| &c.points))?,
        energy_group(set)?,
        quadrature_group(set)?,
    ];
    Ok(VerifySummary::new(set.len(), groups))
}
