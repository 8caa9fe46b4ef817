//! The factored polynomial whose zeros are the stereographic images of the
//! point set, its dense expansion, and the coefficient-path condition number.
//!
//! Each factor is `z^k - m^k`, whose roots are `m * e^{2 pi i l / k}`.
//! Magnitude-sensitive quantities are carried as logarithms and only the
//! final condition numbers are exponentiated.

use std::time::Instant;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::partition::{to_f64, DegreePartition, Height, ParallelKind, ParallelLayout};
use crate::sphere::unit_root;

/// Binary floating point with round-half-even.
pub type BigFloat = FBig<HalfEven, 2>;

pub const MIN_PRECISION_BITS: usize = 128;
pub const DEFAULT_PRECISION_BITS: usize = 256;

/// Relative distance below which two roots count as one.
pub const REPEATED_ROOT_TOL: f64 = 1e-12;

/// `rho(x) = sqrt((1 - x) / (1 + x))`.
pub fn rho(x: f64) -> f64 {
    ((1.0 - x) / (1.0 + x)).sqrt()
}

/// Where a factor's modulus comes from, so it can be re-derived at any
/// precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusSource {
    /// `rho(t)` for an exact height `t`; `rho(-t) = 1 / rho(t)`.
    Rho(Height),
    /// A plain double.
    Value(f64),
}

/// The factor `z^k - m^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub k: usize,
    pub m: f64,
    source: ModulusSource,
}

impl Factor {
    pub fn new(k: usize, m: f64) -> Self {
        Self {
            k,
            m,
            source: ModulusSource::Value(m),
        }
    }

    /// `z^k - rho(t)^k`.
    pub fn rho(k: usize, t: Height) -> Self {
        let m = if *t.numer() == 0 { 1.0 } else { rho(to_f64(t)) };
        Self {
            k,
            m,
            source: ModulusSource::Rho(t),
        }
    }

    pub fn source(&self) -> ModulusSource {
        self.source
    }

    /// `m^k` at the requested precision.
    fn constant(&self, bits: usize) -> BigFloat {
        let k = IBig::from(self.k);
        match self.source {
            ModulusSource::Rho(t) if *t.numer() == 0 => big_int(1, bits),
            ModulusSource::Rho(t) => {
                let (a, n) = (*t.numer(), *t.denom());
                // rho(a/n)^2 = (n - a) / (n + a)
                let sq = big_int(n - a, bits) / big_int(n + a, bits);
                if self.k.is_multiple_of(2) {
                    sq.powi(IBig::from(self.k / 2))
                } else {
                    sq.sqrt() * sq.powi(IBig::from(self.k / 2))
                }
            }
            ModulusSource::Value(m) => big_f64(m, bits).powi(k),
        }
    }
}

pub(crate) fn big_int(v: i64, bits: usize) -> BigFloat {
    BigFloat::from(IBig::from(v)).with_precision(bits).value()
}

pub(crate) fn big_f64(v: f64, bits: usize) -> BigFloat {
    BigFloat::try_from(v)
        .expect("finite double")
        .with_precision(bits)
        .value()
}

/// Product of `z^k - m^k` factors.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPolynomial {
    factors: Vec<Factor>,
    degree: usize,
}

impl FactoredPolynomial {
    /// Validates exponents and moduli and rejects shared roots. Any two
    /// factors with equal modulus share the root `m`.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let poly = Self::from_factors_unchecked(factors)?;
        for (i, a) in poly.factors.iter().enumerate() {
            for (j, b) in poly.factors.iter().enumerate().skip(i + 1) {
                if (a.m - b.m).abs() <= REPEATED_ROOT_TOL * a.m.max(b.m) {
                    return Err(Error::RepeatedRoot(i, j));
                }
            }
        }
        Ok(poly)
    }

    /// Validates exponents and moduli only; repeated roots are allowed and
    /// surface as infinite condition numbers.
    pub fn from_factors_unchecked(factors: Vec<Factor>) -> Result<Self> {
        for (index, f) in factors.iter().enumerate() {
            if f.k == 0 {
                return Err(Error::InvalidFactor {
                    index,
                    reason: "exponent must be positive",
                });
            }
            if !(f.m.is_finite() && f.m > 0.0) {
                return Err(Error::InvalidFactor {
                    index,
                    reason: "modulus must be positive and finite",
                });
            }
        }
        let degree = factors.iter().map(|f| f.k).sum();
        Ok(Self { factors, degree })
    }

    /// `z^n - 1`.
    pub fn unit_roots(n: usize) -> Self {
        Self {
            factors: vec![Factor::rho(n, Ratio::from_integer(0))],
            degree: n,
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Evaluates the product of factor values at a real point.
    pub fn eval_factored(&self, z: &BigFloat, bits: usize) -> BigFloat {
        self.factors.iter().fold(big_int(1, bits), |acc, f| {
            acc * (z.powi(IBig::from(f.k)) - f.constant(bits))
        })
    }
}

/// The factors for a partition: the equator, then the polar pair, then
/// pairs of interior and boundary parallels. Each northern parallel at
/// height `t` with `k` points contributes `z^k - rho(t)^k` (its southern
/// mirror) and `z^k - rho(t)^{-k}` (itself).
pub fn factors_from_partition(
    partition: &DegreePartition,
    layout: &ParallelLayout,
) -> FactoredPolynomial {
    let m = partition.m();
    let north: Vec<_> = layout
        .parallels()
        .iter()
        .filter(|p| *p.height.numer() >= 0)
        .collect();

    let pick = |band: usize, kind: ParallelKind| {
        north
            .iter()
            .find(|p| p.band == band && p.kind == kind)
            .map(|p| (p.count, p.height))
    };

    let mut factors = Vec::new();
    let mut pair = |entry: Option<(usize, Height)>| {
        if let Some((k, t)) = entry {
            factors.push(Factor::rho(k, t));
            factors.push(Factor::rho(k, -t));
        }
    };
    let (k_eq, _) = pick(m, ParallelKind::Interior).expect("equatorial parallel");
    pair(pick(1, ParallelKind::Interior));
    pair(pick(1, ParallelKind::Boundary));
    for j in 2..m {
        pair(pick(j, ParallelKind::Interior));
    }
    for j in 2..m {
        pair(pick(j, ParallelKind::Boundary));
    }
    factors.insert(0, Factor::rho(k_eq, Ratio::from_integer(0)));

    let poly = FactoredPolynomial::from_factors_unchecked(factors).expect("valid factors");
    debug_assert_eq!(poly.degree() as i64, partition.degree());
    poly
}

/// All zeros in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRootSet {
    pub roots: Vec<Complex64>,
}

pub fn roots(f: &FactoredPolynomial) -> PlanarRootSet {
    let mut roots = Vec::with_capacity(f.degree());
    for fac in f.factors() {
        for l in 0..fac.k {
            let (c, s) = unit_root(l, fac.k);
            roots.push(Complex64::new(fac.m * c, fac.m * s));
        }
    }
    PlanarRootSet { roots }
}

/// Monic coefficients in extended precision, index `i` holding `z^i`.
#[derive(Debug, Clone)]
pub struct DensePolynomial {
    coefficients: Vec<BigFloat>,
    precision_bits: usize,
}

impl DensePolynomial {
    pub fn coefficients(&self) -> &[BigFloat] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .map(|c| c.to_f64().value())
            .collect()
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coefficients
            .iter()
            .map(|c| c.to_decimal().value().to_string())
            .collect()
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, z: &BigFloat) -> BigFloat {
        self.coefficients
            .iter()
            .rev()
            .fold(big_int(0, self.precision_bits), |acc, c| acc * z + c)
    }
}

/// Multiplies out the factors by sparse convolution.
pub fn expand(f: &FactoredPolynomial, precision_bits: usize) -> Result<DensePolynomial> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::PrecisionTooLow {
            bits: precision_bits,
            min: MIN_PRECISION_BITS,
        });
    }
    let zero = big_int(0, precision_bits);
    let mut coeffs = vec![zero.clone(); f.degree() + 1];
    coeffs[0] = big_int(1, precision_bits);
    let mut deg = 0;
    for fac in f.factors() {
        let c = fac.constant(precision_bits);
        let k = fac.k;
        // (sum a_i z^i)(z^k - c): walk downwards so a_{i-k} is still unshifted
        for i in (0..=deg + k).rev() {
            let shifted = if i >= k {
                coeffs[i - k].clone()
            } else {
                zero.clone()
            };
            let own = if i <= deg {
                &coeffs[i] * &c
            } else {
                zero.clone()
            };
            coeffs[i] = shifted - own;
        }
        deg += k;
    }
    Ok(DensePolynomial {
        coefficients: coeffs,
        precision_bits,
    })
}

/// Squared Weyl norm held in extended precision.
#[derive(Debug, Clone)]
pub struct WeylNorm {
    pub squared: BigFloat,
}

impl WeylNorm {
    pub fn value(&self) -> f64 {
        self.squared.to_f64().value().sqrt()
    }

    pub fn log_big(&self) -> BigFloat {
        self.squared.ln() / big_int(2, self.squared.precision())
    }

    pub fn log(&self) -> f64 {
        self.log_big().to_f64().value()
    }
}

/// `sqrt(sum |a_i|^2 / C(N, i))` with exact binomials.
pub fn weyl_norm(p: &DensePolynomial) -> WeylNorm {
    let n = p.degree();
    let bits = p.precision_bits;
    let mut binom = UBig::ONE;
    let mut acc = big_int(0, bits);
    for (i, a) in p.coefficients.iter().enumerate() {
        let b = BigFloat::from(binom.clone()).with_precision(bits).value();
        acc += (a * a) / b;
        if i < n {
            binom = binom * UBig::from(n - i) / UBig::from(i + 1);
        }
    }
    WeylNorm { squared: acc }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Coefficient,
    Spherical,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Coefficient => "coefficient",
            Self::Spherical => "spherical",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision_bits: Option<usize>,
    #[serde(rename = "grid_L", skip_serializing_if = "Option::is_none", default)]
    pub grid_l: Option<usize>,
    #[serde(rename = "grid_K", skip_serializing_if = "Option::is_none", default)]
    pub grid_k: Option<usize>,
}

/// Normalized condition numbers at every zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    #[serde(rename = "N")]
    pub degree: usize,
    pub method: Method,
    #[serde(with = "format::vec")]
    pub mu_per_zero: Vec<f64>,
    #[serde(with = "format")]
    pub mu_max: f64,
    #[serde(rename = "mu_over_sqrtN", with = "format")]
    pub mu_over_sqrt_n: f64,
    pub parameters: ReportParameters,
    #[serde(with = "format")]
    pub elapsed: f64,
}

impl ConditionReport {
    pub(crate) fn from_values(
        method: Method,
        mu_per_zero: Vec<f64>,
        parameters: ReportParameters,
        started: Instant,
    ) -> Self {
        let degree = mu_per_zero.len();
        let mu_max = mu_per_zero
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            degree,
            method,
            mu_max,
            mu_over_sqrt_n: mu_max / (degree as f64).sqrt(),
            mu_per_zero,
            parameters,
            elapsed: started.elapsed().as_secs_f64(),
        }
    }

    /// Index of the worst-conditioned zero, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.mu_per_zero.iter().enumerate() {
            if v > self.mu_per_zero[best] {
                best = i;
            }
        }
        best
    }
}

/// `log prod_{j != i} |z_i - z_j|`, or `-inf` when a second root lies within
/// the repeated-root tolerance.
pub(crate) fn log_derivative_at_roots(roots: &[Complex64]) -> Vec<f64> {
    roots
        .par_iter()
        .enumerate()
        .map(|(i, zi)| {
            let mut acc = 0.0;
            for (j, zj) in roots.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = (zi - zj).norm();
                if d <= REPEATED_ROOT_TOL * zi.norm().max(zj.norm()) {
                    return f64::NEG_INFINITY;
                }
                acc += d.ln();
            }
            acc
        })
        .collect()
}

/// `mu(z) = sqrt(N) ||P|| (1 + |z|^2)^{N/2 - 1} / |P'(z)|` at every zero,
/// with `|P'(z_i)| = prod_{j != i} |z_i - z_j|` for the monic product.
pub fn mu_norm_coeff(f: &FactoredPolynomial, precision_bits: usize) -> Result<ConditionReport> {
    let started = Instant::now();
    let dense = expand(f, precision_bits)?;
    let log_norm = weyl_norm(&dense).log();
    let n = f.degree() as f64;
    let zs = roots(f).roots;
    let log_deriv = log_derivative_at_roots(&zs);
    let mu: Vec<f64> = zs
        .iter()
        .zip(&log_deriv)
        .map(|(z, &ld)| {
            let log_mu = 0.5 * n.ln() + log_norm + (0.5 * n - 1.0) * z.norm_sqr().ln_1p() - ld;
            log_mu.exp()
        })
        .collect();
    Ok(ConditionReport::from_values(
        Method::Coefficient,
        mu,
        ReportParameters {
            precision_bits: Some(precision_bits),
            ..Default::default()
        },
        started,
    ))
}
