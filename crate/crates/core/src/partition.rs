//! Degree decompositions and the parallel layout they induce.
//!
//! A decomposition `N = r_M + 2(r_1 + ... + r_{M-1})` is mirrored to
//! `2M - 1` bands, `r_{M+j} = r_{M-j}`. Band `j` spans heights
//! `[H_j, H_{j-1}]` with `H_j = 1 - (2/N) * sum_{k<=j} r_k`, so each band has
//! normalized area `r_j / N`. Every band contributes an interior parallel at
//! its mid height `h_j` and shares boundary parallels with its neighbours.
//!
//! Heights are kept as exact rationals with denominator `N`; conversion to
//! `f64` happens only when points are materialized.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, PartitionViolation, Result};

/// Exact height of a parallel, an integer over `N`.
pub type Height = Ratio<i64>;

/// Smallest degree accepted by [`partition_erres`].
pub const MIN_ERRES_DEGREE: i64 = 16;

/// The `(M, r_1..r_M)` decomposition of a degree, mirrored to `2M - 1` bands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePartition {
    n: i64,
    m: usize,
    r: Vec<i64>,
    s: Vec<i64>,
    rem: Vec<i64>,
    c1: Ratio<i64>,
    c2: Ratio<i64>,
}

impl DegreePartition {
    pub fn degree(&self) -> i64 {
        self.n
    }

    /// Number of bands in the northern half including the equatorial one.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Total number of bands, `2M - 1`.
    pub fn band_count(&self) -> usize {
        2 * self.m - 1
    }

    /// `r_j` for `1 <= j <= 2M - 1`.
    pub fn r(&self, j: usize) -> i64 {
        self.r[j - 1]
    }

    /// `s_j`, the number of sixths of `r_j` that feed boundary parallels.
    pub fn s(&self, j: usize) -> i64 {
        self.s[j - 1]
    }

    pub fn rem(&self, j: usize) -> i64 {
        self.rem[j - 1]
    }

    /// The caller-facing half `r_1..r_M`.
    pub fn half_counts(&self) -> &[i64] {
        &self.r[..self.m]
    }

    pub fn growth_bounds(&self) -> (Ratio<i64>, Ratio<i64>) {
        (self.c1, self.c2)
    }

    fn from_half(n: i64, half: &[i64], c1: Ratio<i64>, c2: Ratio<i64>) -> Self {
        let m = half.len();
        let mut r = half.to_vec();
        r.extend(half[..m - 1].iter().rev());
        let bands = r.len();
        let mut s = vec![0; bands];
        let mut rem = vec![0; bands];
        for j in 2..bands {
            s[j - 1] = r[j - 1] / 6;
            rem[j - 1] = r[j - 1] % 6;
        }
        Self {
            n,
            m,
            r,
            s,
            rem,
            c1,
            c2,
        }
    }
}

/// Default growth constants `(c1, c2) = (1, 16)`.
pub fn default_growth_bounds() -> (Ratio<i64>, Ratio<i64>) {
    (Ratio::from_integer(1), Ratio::from_integer(16))
}

/// The simple decomposition `M = floor(sqrt(N/4))`, `r_j = 4j - 1` for
/// `j < M` and `r_M = N - 4M^2 + 6M - 2`.
pub fn partition_erres(n: i64) -> Result<DegreePartition> {
    if n < MIN_ERRES_DEGREE {
        return Err(Error::Domain {
            degree: n,
            reason: "the default decomposition needs N >= 16",
        });
    }
    let m = isqrt(n / 4);
    let mut half: Vec<i64> = (1..m).map(|j| 4 * j - 1).collect();
    half.push(n - 4 * m * m + 6 * m - 2);
    let (c1, c2) = default_growth_bounds();
    partition_custom(n, &half, c1, c2)
}

/// Validates a caller-supplied `r_1..r_M` against the construction's
/// hypotheses. Every violated hypothesis is reported.
pub fn partition_custom(
    n: i64,
    half: &[i64],
    c1: Ratio<i64>,
    c2: Ratio<i64>,
) -> Result<DegreePartition> {
    let mut violations = Vec::new();
    let m = half.len();
    if m < 2 {
        violations.push(PartitionViolation::TooFewBands { m });
    }
    if c1 <= Ratio::zero() || c2 < c1 {
        violations.push(PartitionViolation::NonPositiveConstant);
    }
    for (idx, &r) in half.iter().enumerate() {
        let j = idx + 1;
        if r <= 0 {
            violations.push(PartitionViolation::NonPositive { j, r });
            continue;
        }
        let rj = Ratio::from_integer(r);
        let jr = Ratio::from_integer(j as i64);
        if rj < c1 * jr {
            violations.push(PartitionViolation::BelowLowerBound { j, r });
        }
        if rj > c2 * jr {
            violations.push(PartitionViolation::AboveUpperBound { j, r });
        }
    }
    if m >= 1 {
        let actual = half[m - 1] + 2 * half[..m - 1].iter().sum::<i64>();
        if actual != n {
            violations.push(PartitionViolation::SumMismatch {
                expected: n,
                actual,
            });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidPartition(violations));
    }
    Ok(DegreePartition::from_half(n, half, c1, c2))
}

fn isqrt(v: i64) -> i64 {
    let mut x = (v as f64).sqrt() as i64;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParallelKind {
    /// Mid-height parallel `h_j` of a band.
    Interior,
    /// Band boundary `H_j` shared by two bands.
    Boundary,
}

/// A circle of constant height carrying equally spaced points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parallel {
    pub height: Height,
    pub count: usize,
    pub kind: ParallelKind,
    /// Band index `j` of `h_j` or `H_j`.
    pub band: usize,
}

impl Parallel {
    pub fn height_f64(&self) -> f64 {
        to_f64(self.height)
    }
}

pub(crate) fn to_f64(h: Height) -> f64 {
    // numerator and denominator are both far below 2^53
    h.numer().to_f64().unwrap() / h.denom().to_f64().unwrap()
}

/// Heights and per-parallel point counts of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelLayout {
    partition: DegreePartition,
    boundaries: Vec<Height>,
    mids: Vec<Height>,
    parallels: Vec<Parallel>,
}

impl ParallelLayout {
    pub fn partition(&self) -> &DegreePartition {
        &self.partition
    }

    /// `H_j` for `0 <= j <= 2M - 1`.
    pub fn boundary(&self, j: usize) -> Height {
        self.boundaries[j]
    }

    /// `h_j` for `1 <= j <= 2M - 1`.
    pub fn mid(&self, j: usize) -> Height {
        self.mids[j - 1]
    }

    /// Non-empty parallels, strictly decreasing in height.
    pub fn parallels(&self) -> &[Parallel] {
        &self.parallels
    }

    pub fn total_points(&self) -> usize {
        self.parallels.iter().map(|p| p.count).sum()
    }
}

/// Places `r_1` points on the polar parallels, `4 s_j + rem_j` on interior
/// parallels `h_j` and `s_j + s_{j+1}` on boundary parallels `H_j`.
pub fn layout(partition: &DegreePartition) -> ParallelLayout {
    let n = partition.degree();
    let bands = partition.band_count();

    let mut boundaries = Vec::with_capacity(bands + 1);
    let mut acc = 0;
    boundaries.push(Ratio::from_integer(1));
    for j in 1..=bands {
        acc += partition.r(j);
        boundaries.push(Ratio::new(n - 2 * acc, n));
    }
    let mids: Vec<Height> = (1..=bands)
        .map(|j| boundaries[j - 1] - Ratio::new(partition.r(j), n))
        .collect();

    let interior_count = |j: usize| -> i64 {
        if j == 1 || j == bands {
            partition.r(j)
        } else {
            4 * partition.s(j) + partition.rem(j)
        }
    };

    let mut parallels = Vec::with_capacity(2 * bands);
    for j in 1..=bands {
        parallels.push(Parallel {
            height: mids[j - 1],
            count: interior_count(j) as usize,
            kind: ParallelKind::Interior,
            band: j,
        });
        if j < bands {
            let count = partition.s(j) + partition.s(j + 1);
            if count > 0 {
                parallels.push(Parallel {
                    height: boundaries[j],
                    count: count as usize,
                    kind: ParallelKind::Boundary,
                    band: j,
                });
            }
        }
    }

    ParallelLayout {
        partition: partition.clone(),
        boundaries,
        mids,
        parallels,
    }
}
