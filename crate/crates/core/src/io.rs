//! JSON file formats for point sets, factored polynomials and partitions.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::format;
use crate::partition::{default_growth_bounds, partition_custom, DegreePartition};
use crate::polynomial::{Factor, FactoredPolynomial};
use crate::sphere::{SpherePoint, SpherePointSet};
use crate::Construction;

/// Point set export: metadata first, then `[x, y, z]` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    /// Parallel heights, north to south.
    #[serde(with = "format::vec")]
    pub heights: Vec<f64>,
    pub counts: Vec<usize>,
    #[serde(with = "format::triples")]
    pub points: Vec<[f64; 3]>,
}

impl PointSetFile {
    pub fn from_construction(c: &Construction) -> Self {
        let pars = c.layout.parallels();
        Self {
            n: c.degree(),
            m: c.partition.m(),
            heights: pars.iter().map(|p| p.height_f64()).collect(),
            counts: pars.iter().map(|p| p.count).collect(),
            points: c.points.points().iter().map(|p| p.to_array()).collect(),
        }
    }

    pub fn to_point_set(&self) -> SpherePointSet {
        SpherePointSet::from_points(
            self.points
                .iter()
                .map(|&[x, y, z]| SpherePoint::new(x, y, z))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub k: usize,
    #[serde(with = "format")]
    pub m: f64,
}

/// Factored polynomial export, one `{k, m}` entry per `z^k - m^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoredPolynomialFile {
    pub degree: usize,
    pub factors: Vec<FactorEntry>,
}

impl FactoredPolynomialFile {
    pub fn from_polynomial(p: &FactoredPolynomial) -> Self {
        Self {
            degree: p.degree(),
            factors: p
                .factors()
                .iter()
                .map(|f| FactorEntry { k: f.k, m: f.m })
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<FactoredPolynomial> {
        FactoredPolynomial::new(self.factors.iter().map(|f| Factor::new(f.k, f.m)).collect())
    }
}

/// A caller-supplied decomposition: either a bare `[r_1, ..., r_M]` array or
/// an object with optional growth constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionFile {
    Bare(Vec<i64>),
    Full {
        r: Vec<i64>,
        #[serde(default)]
        c1: Option<[i64; 2]>,
        #[serde(default)]
        c2: Option<[i64; 2]>,
    },
}

impl PartitionFile {
    pub fn to_partition(&self, n: i64) -> Result<DegreePartition> {
        let (d1, d2) = default_growth_bounds();
        match self {
            Self::Bare(r) => partition_custom(n, r, d1, d2),
            Self::Full { r, c1, c2 } => {
                let q = |c: &Option<[i64; 2]>, d| c.map_or(d, |[a, b]| Ratio::new(a, b));
                partition_custom(n, r, q(c1, d1), q(c2, d2))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_round_trip_is_byte_identical() {
        let c = Construction::erres(16).unwrap();
        let file = PointSetFile::from_construction(&c);
        assert_eq!(file.counts, vec![3, 1, 8, 1, 3]);
        let s = serde_json::to_string_pretty(&file).unwrap();
        let back: PointSetFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, file);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
        assert_eq!(back.to_point_set().points(), c.points.points());
        let order: Vec<usize> = ["\"N\"", "\"M\"", "\"heights\"", "\"counts\"", "\"points\""]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn polynomial_round_trip() {
        let c = Construction::erres(16).unwrap();
        let file = FactoredPolynomialFile::from_polynomial(&c.polynomial);
        assert_eq!(file.factors.len(), 5);
        let s = serde_json::to_string(&file).unwrap();
        assert!(s.starts_with("{\"degree\":16,\"factors\":[{\"k\":8,\"m\":1.0000000000000000e0}"));
        let back: FactoredPolynomialFile = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert_eq!(back.to_polynomial().unwrap().degree(), 16);
    }

    #[test]
    fn partition_files() {
        let bare: PartitionFile = serde_json::from_str("[3, 7, 11, 15, 28]").unwrap();
        let p = bare.to_partition(100).unwrap();
        assert_eq!(p, crate::partition_erres(100).unwrap());
        let full: PartitionFile = serde_json::from_str(r#"{"r": [1, 14], "c1": [2, 1]}"#).unwrap();
        assert!(full.to_partition(16).is_err());
    }
}
