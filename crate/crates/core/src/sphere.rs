//! Points on the unit sphere: the construction itself, stereographic
//! transport to the plane, and nearest-point queries.
//!
//! Distances are chordal (Euclidean in R^3) everywhere.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::ParallelLayout;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub const NORTH: Self = Self::new(0.0, 0.0, 1.0);
    pub const SOUTH: Self = Self::new(0.0, 0.0, -1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Projects an arbitrary non-zero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Self {
        let n = (x * x + y * y + z * z).sqrt();
        Self::new(x / n, y / n, z / n)
    }

    /// Point on the parallel of height `t` at longitude `phi`.
    pub fn on_parallel(t: f64, phi: f64) -> Self {
        let s = (1.0 - t * t).max(0.0).sqrt();
        let (sin, cos) = phi.sin_cos();
        Self::new(s * cos, s * sin, t)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn longitude(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn mirrored(&self) -> Self {
        Self::new(self.x, self.y, -self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Orthogonal 3x3 matrix acting on sphere points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation([[f64; 3]; 3]);

impl Rotation {
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Self([
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ])
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let m = &self.0;
        SpherePoint::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }
}

/// `(cos, sin)` of `2 pi l / k`, exact at multiples of a quarter turn.
pub(crate) fn unit_root(l: usize, k: usize) -> (f64, f64) {
    let l = l % k;
    if (4 * l).is_multiple_of(k) {
        return match 4 * l / k {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * l as f64 / k as f64).sin_cos();
    (c, s)
}

/// Image of a sphere point in the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanePoint {
    Finite(Complex64),
    Infinity,
}

impl PlanePoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Self::Finite(w) => Some(w),
            Self::Infinity => None,
        }
    }
}

/// `(x + iy) / (1 - z)`; the north pole maps to infinity.
pub fn stereo_to_plane(p: &SpherePoint) -> PlanePoint {
    if p.z > 0.0 {
        // (1 + z) / (x - iy) is the same quotient without the cancellation in 1 - z.
        let rho2 = p.x * p.x + p.y * p.y;
        if rho2 == 0.0 {
            return PlanePoint::Infinity;
        }
        let f = (1.0 + p.z) / rho2;
        PlanePoint::Finite(Complex64::new(p.x * f, p.y * f))
    } else {
        let f = 1.0 / (1.0 - p.z);
        PlanePoint::Finite(Complex64::new(p.x * f, p.y * f))
    }
}

pub fn stereo_to_sphere(w: Complex64) -> SpherePoint {
    let a2 = w.norm_sqr();
    let d = 1.0 + a2;
    SpherePoint::new(2.0 * w.re / d, 2.0 * w.im / d, (a2 - 1.0) / d)
}

/// Points sharing one exact height, sorted by longitude.
#[derive(Debug, Clone)]
struct Ring {
    height: f64,
    /// `(longitude, point index)`, sorted.
    members: Vec<(f64, usize)>,
}

/// An immutable point set with a latitude-band index for distance queries.
#[derive(Debug, Clone)]
pub struct SpherePointSet {
    points: Vec<SpherePoint>,
    parallel_index: Vec<usize>,
    rings: Vec<Ring>,
}

impl SpherePointSet {
    /// Indexes an arbitrary collection of unit vectors.
    pub fn from_points(points: Vec<SpherePoint>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[b].z.total_cmp(&points[a].z).then_with(|| a.cmp(&b)));
        let mut rings: Vec<Ring> = Vec::new();
        let mut parallel_index = vec![0; points.len()];
        for idx in order {
            let p = points[idx];
            match rings.last_mut() {
                Some(r) if r.height == p.z => r.members.push((p.longitude(), idx)),
                _ => rings.push(Ring {
                    height: p.z,
                    members: vec![(p.longitude(), idx)],
                }),
            }
            parallel_index[idx] = rings.len() - 1;
        }
        for r in &mut rings {
            r.members
                .sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        }
        Self {
            points,
            parallel_index,
            rings,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> SpherePoint {
        self.points[i]
    }

    /// Index of the parallel (exact height class) holding point `i`,
    /// counted from the north.
    pub fn parallel_of(&self, i: usize) -> usize {
        self.parallel_index[i]
    }

    pub fn parallel_count(&self) -> usize {
        self.rings.len()
    }

    pub fn rotated(&self, rot: &Rotation) -> Self {
        Self::from_points(self.points.iter().map(|p| rot.apply(p)).collect())
    }

    /// Closest member to `p` by chordal distance, lowest index on ties.
    pub fn nearest(&self, p: &SpherePoint) -> (usize, f64) {
        self.search(p, None).expect("nearest on an empty point set")
    }

    /// Same as [`Self::nearest`] over members other than `skip`.
    pub fn nearest_excluding(&self, p: &SpherePoint, skip: usize) -> Option<(usize, f64)> {
        self.search(p, Some(skip))
    }

    fn search(&self, p: &SpherePoint, skip: Option<usize>) -> Option<(usize, f64)> {
        if self.rings.is_empty() {
            return None;
        }
        let phi = p.longitude();
        // first ring with height <= p.z
        let split = self.rings.partition_point(|r| r.height > p.z);
        let mut best: Option<(usize, f64)> = None;

        let visit = |ring: &Ring, best: &mut Option<(usize, f64)>| -> bool {
            let bound = dist_to_circle(p, ring.height);
            if let Some((_, d)) = *best {
                if bound * (1.0 - 1e-12) - 1e-15 > d {
                    return false;
                }
            }
            self.scan_ring(ring, p, phi, skip, best);
            true
        };

        let (mut up, mut down) = (split, split);
        let (mut up_open, mut down_open) = (true, true);
        while up_open || down_open {
            if down_open {
                if down < self.rings.len() && visit(&self.rings[down], &mut best) {
                    down += 1;
                } else {
                    down_open = false;
                }
            }
            if up_open {
                if up > 0 && visit(&self.rings[up - 1], &mut best) {
                    up -= 1;
                } else {
                    up_open = false;
                }
            }
        }
        best
    }

    fn scan_ring(
        &self,
        ring: &Ring,
        p: &SpherePoint,
        phi: f64,
        skip: Option<usize>,
        best: &mut Option<(usize, f64)>,
    ) {
        let members = &ring.members;
        let k = members.len();
        let mut consider = |idx: usize| {
            if Some(idx) == skip {
                return;
            }
            let d = p.dist(&self.points[idx]);
            let better = match *best {
                None => true,
                Some((bi, bd)) => d < bd || (d == bd && idx < bi),
            };
            if better {
                *best = Some((idx, d));
            }
        };
        if k <= 8 {
            for &(_, idx) in members {
                consider(idx);
            }
            return;
        }
        let pos = members.partition_point(|m| m.0 < phi);
        // two neighbours on either side cover the skipped member and exact ties
        for off in 0..4 {
            let at = (pos + k + off - 2) % k;
            consider(members[at].1);
        }
        // equal-longitude runs when several members share a longitude
        let mut at = pos;
        while at < k && members[at].0 == members[pos % k].0 && at - pos < k {
            consider(members[at].1);
            at += 1;
        }
    }

    /// Minimum pairwise chordal distance.
    pub fn separation(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints {
                got: self.len(),
                min: 2,
            });
        }
        Ok((0..self.len())
            .into_par_iter()
            .map(|i| self.nearest_excluding(&self.points[i], i).unwrap().1)
            .reduce(|| f64::INFINITY, f64::min))
    }

    /// Largest distance from a probe to the set.
    pub fn covering(&self, probes: &[SpherePoint]) -> f64 {
        probes
            .par_iter()
            .map(|q| self.nearest(q).1)
            .reduce(|| 0.0, f64::max)
    }
}

/// Chordal distance from `p` to the parallel of height `t`.
fn dist_to_circle(p: &SpherePoint, t: f64) -> f64 {
    let rho = (p.x * p.x + p.y * p.y).sqrt();
    let s = (1.0 - t * t).max(0.0).sqrt();
    let (dr, dz) = (rho - s, p.z - t);
    (dr * dr + dz * dz).sqrt()
}

/// Equally spaced points on every parallel of the layout, including the
/// point at longitude zero.
pub fn build_points(layout: &ParallelLayout) -> SpherePointSet {
    let mut points = Vec::with_capacity(layout.total_points());
    for par in layout.parallels() {
        let t = par.height_f64();
        let s = (1.0 - t * t).sqrt();
        for m in 0..par.count {
            let (c, sn) = unit_root(m, par.count);
            points.push(SpherePoint::new(s * c, s * sn, t));
        }
    }
    SpherePointSet::from_points(points)
}

/// Deterministic golden-angle spiral with `n` nearly uniform points.
pub fn spiral_probes(n: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let t = 1.0 - (2 * i + 1) as f64 / n as f64;
            SpherePoint::on_parallel(t, golden * i as f64)
        })
        .collect()
}

/// Chord midpoints between consecutive members of each parallel and between
/// each member and its nearest neighbour on the next parallel south.
pub fn midpoint_probes(set: &SpherePointSet) -> Vec<SpherePoint> {
    let mid =
        |a: &SpherePoint, b: &SpherePoint| SpherePoint::normalized(a.x + b.x, a.y + b.y, a.z + b.z);
    let mut out = Vec::new();
    for (ri, ring) in set.rings.iter().enumerate() {
        let k = ring.members.len();
        if k >= 2 {
            for w in 0..k {
                let a = set.points[ring.members[w].1];
                let b = set.points[ring.members[(w + 1) % k].1];
                if a.dist(&b) < 2.0 - 1e-12 {
                    out.push(mid(&a, &b));
                }
            }
        }
        if let Some(next) = set.rings.get(ri + 1) {
            for &(_, ia) in &ring.members {
                let a = set.points[ia];
                let b = next
                    .members
                    .iter()
                    .map(|&(_, ib)| set.points[ib])
                    .min_by(|u, v| a.dist(u).total_cmp(&a.dist(v)))
                    .unwrap();
                out.push(mid(&a, &b));
            }
        }
    }
    out
}

/// Deterministic probe generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeSampler {
    Spiral(usize),
    /// Spiral probes followed by construction midpoints.
    SpiralWithMidpoints(usize),
    /// The members themselves.
    Members,
}

impl ProbeSampler {
    pub fn sample(&self, set: &SpherePointSet) -> Vec<SpherePoint> {
        match *self {
            Self::Spiral(n) => spiral_probes(n),
            Self::SpiralWithMidpoints(n) => {
                let mut v = spiral_probes(n);
                v.extend(midpoint_probes(set));
                v
            }
            Self::Members => set.points.clone(),
        }
    }
}

/// Brute-force nearest member, lowest index on ties.
pub fn nearest_brute_force(points: &[SpherePoint], p: &SpherePoint) -> (usize, f64) {
    points
        .iter()
        .enumerate()
        .map(|(i, q)| (i, p.dist(q)))
        .min_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(Ordering::Equal)
                .then(a.0.cmp(&b.0))
        })
        .expect("empty point set")
}
