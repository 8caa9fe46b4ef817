//! One-dimensional rules with their a priori error bounds, product
//! quadrature on the sphere, and the spherical route to the condition number.

use std::f64::consts::PI;
use std::time::Instant;

use num_traits::{FromPrimitive, Num};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomial::{ConditionReport, Method, ReportParameters};
use crate::potential::{kappa, log_potential};
use crate::sphere::{unit_root, SpherePoint, SpherePointSet};

fn from_usize<T: FromPrimitive>(n: usize) -> T {
    T::from_usize(n).expect("representable panel count")
}

/// Composite midpoint rule with `n` panels.
pub fn midpoint_rule<T, F>(f: F, a: T, b: T, n: usize) -> T
where
    T: Num + FromPrimitive + Clone,
    F: Fn(T) -> T,
{
    assert!(n >= 1, "at least one panel");
    let two = T::one() + T::one();
    let h = (b - a.clone()) / from_usize(n);
    let mut acc = T::zero();
    for i in 0..n {
        let x = a.clone() + h.clone() * (from_usize::<T>(2 * i + 1)) / two.clone();
        acc = acc + f(x);
    }
    acc * h
}

/// `(b - a)^3 sup|f''| / (24 n^2)`.
pub fn midpoint_bound(a: f64, b: f64, n: usize, f2_sup: f64) -> f64 {
    (b - a).powi(3) * f2_sup / (24.0 * (n * n) as f64)
}

/// Composite Simpson rule, `n` panels of three nodes each.
pub fn simpson_rule<T, F>(f: F, a: T, b: T, n: usize) -> T
where
    T: Num + FromPrimitive + Clone,
    F: Fn(T) -> T,
{
    assert!(n >= 1, "at least one panel");
    let two = T::one() + T::one();
    let four = two.clone() + two.clone();
    let six = four.clone() + two.clone();
    let h = (b - a.clone()) / from_usize(n);
    let mut acc = T::zero();
    for i in 0..n {
        let lo = a.clone() + h.clone() * from_usize(i);
        let hi = lo.clone() + h.clone();
        let mid = (lo.clone() + hi.clone()) / two.clone();
        acc = acc + f(lo) + four.clone() * f(mid) + f(hi);
    }
    acc * h / six
}

/// `(b - a)^5 sup|f''''| / (2880 n^4)`.
pub fn simpson_bound(a: f64, b: f64, n: usize, f4_sup: f64) -> f64 {
    (b - a).powi(5) * f4_sup / (2880.0 * (n as f64).powi(4))
}

/// Midpoint rule plus `(b - a)^2 / 24` times `int f'' = f'(b) - f'(a)`.
/// Exact on cubics.
pub fn corrected_midpoint<T, F>(f: F, df_at_ends: (T, T), a: T, b: T) -> T
where
    T: Num + FromPrimitive + Clone,
    F: Fn(T) -> T,
{
    let two = T::one() + T::one();
    let width = b.clone() - a.clone();
    let (da, db) = df_at_ends;
    width.clone() * f((a + b) / two) + width.clone() * width / from_usize(24) * (db - da)
}

/// `(b - a)^4 sup|f'''| / 64`.
pub fn corrected_midpoint_bound(a: f64, b: f64, f3_sup: f64) -> f64 {
    (b - a).powi(4) * f3_sup / 64.0
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Newton iteration on `P_n` from the estimate `cos(pi (i + 3/4) / (n + 1/2))`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre in height times the uniform rule in longitude, for the
/// surface measure normalized to total mass one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub latitude_nodes: Vec<(f64, f64)>,
    pub longitude_count: usize,
}

impl QuadratureGrid {
    pub fn latitude_count(&self) -> usize {
        self.latitude_nodes.len()
    }

    pub fn total_nodes(&self) -> usize {
        self.latitude_nodes.len() * self.longitude_count
    }

    /// Nodes of one latitude row with their normalized weights.
    pub fn row(&self, l: usize) -> impl Iterator<Item = (SpherePoint, f64)> + '_ {
        let (t, w) = self.latitude_nodes[l];
        let k = self.longitude_count;
        let s = (1.0 - t * t).sqrt();
        let weight = w / (2.0 * k as f64);
        (0..k).map(move |m| {
            let (c, sn) = unit_root(m, k);
            (SpherePoint::new(s * c, s * sn, t), weight)
        })
    }

    /// `int_S f dsigma` with `sigma(S) = 1`.
    pub fn integrate<F: Fn(&SpherePoint) -> f64 + Sync>(&self, f: F) -> f64 {
        let rows: Vec<f64> = (0..self.latitude_count())
            .into_par_iter()
            .map(|l| self.row(l).map(|(q, w)| w * f(&q)).sum())
            .collect();
        rows.iter().sum()
    }
}

/// Exact for spherical harmonics of degree up to `min(2L - 1, K - 1)`.
pub fn sphere_grid(latitudes: usize, longitudes: usize) -> Result<QuadratureGrid> {
    if latitudes < 2 {
        return Err(Error::InvalidGrid(format!("need L >= 2, got {latitudes}")));
    }
    if longitudes < 4 {
        return Err(Error::InvalidGrid(format!("need K >= 4, got {longitudes}")));
    }
    Ok(QuadratureGrid {
        latitude_nodes: gauss_legendre(latitudes),
        longitude_count: longitudes,
    })
}

/// `L = K = max(64, 2N)`.
pub fn default_grid_size(n: usize) -> (usize, usize) {
    let s = (2 * n).max(64);
    (s, s)
}

/// Minimum node count per point accepted by [`mu_norm_spherical`].
pub const NODES_PER_POINT: usize = 64;

/// Upper bound on `exp(G)` observed for the default construction with
/// `16 <= N <= 1024`. The largest value, about 0.83, occurs at `N = 16`.
pub const SCALED_INTEGRAND_BOUND: f64 = 1.0;

/// Streaming `log sum_k exp(x_k)` that rescales on every new maximum.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// `G(q) = 2 sum_i log |q - p_i| + 2 kappa N - log N`, the log of the
/// scaled squared product `prod |q - p_i|^2 / (e^{-2 kappa N} N)`.
pub fn scaled_log_integrand(set: &SpherePointSet, q: &SpherePoint) -> f64 {
    let n = set.len() as f64;
    2.0 * log_potential(set, q) + 2.0 * kappa() * n - n.ln()
}

/// `mu_i = sqrt(N(N+1))/2 * ||prod |. - p_j| ||_{L^2} / prod_{j != i} |p_i - p_j|`
/// with the integral taken in the log domain on `grid`.
pub fn mu_norm_spherical(set: &SpherePointSet, grid: &QuadratureGrid) -> Result<ConditionReport> {
    let started = Instant::now();
    let n = set.len();
    let required = NODES_PER_POINT * n;
    if grid.total_nodes() < required {
        return Err(Error::GridTooCoarse {
            nodes: grid.total_nodes(),
            required,
        });
    }
    let nf = n as f64;

    // latitude-major, reduced in a fixed order
    let rows: Vec<Vec<f64>> = (0..grid.latitude_count())
        .into_par_iter()
        .map(|l| {
            grid.row(l)
                .map(|(q, w)| w.ln() + scaled_log_integrand(set, &q))
                .collect()
        })
        .collect();
    let mut lse = LogSumExp::default();
    for row in &rows {
        for &x in row {
            lse.push(x);
        }
    }
    let log_integral = lse.value();

    let pts = set.points();
    let mu: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut d = 0.0;
            for (j, q) in pts.iter().enumerate() {
                if j != i {
                    d += pts[i].dist(q).ln();
                }
            }
            let log_mu = 0.5 * (nf * (nf + 1.0)).ln() - std::f64::consts::LN_2
                + 0.5 * (log_integral + nf.ln() - 2.0 * kappa() * nf)
                - d;
            log_mu.exp()
        })
        .collect();

    Ok(ConditionReport::from_values(
        Method::Spherical,
        mu,
        ReportParameters {
            grid_l: Some(grid.latitude_count()),
            grid_k: Some(grid.longitude_count),
            ..Default::default()
        },
        started,
    ))
}
