//! Explicit univariate polynomials with normalized condition number of
//! order `sqrt(N)`.
//!
//! The zeros are the stereographic images of a point set laid out on
//! parallels of the unit sphere. Each band of the layout carries a number of
//! points proportional to its area. The crate builds the layout
//! ([`partition`]), the points ([`sphere`]) and the factored polynomial
//! ([`polynomial`]). It evaluates the condition number two independent ways:
//! from the Weyl norm of the coefficients, and from a log-domain integral
//! over the sphere ([`quadrature`]). The potential-theoretic quantities
//! behind the bound are in [`potential`].

pub mod error;
pub mod format;
pub mod io;
pub mod partition;
pub mod polynomial;
pub mod potential;
pub mod quadrature;
pub mod sphere;
pub mod sweep;
pub mod verify;

pub use error::{Error, PartitionViolation, Result};
pub use partition::{
    layout, partition_custom, partition_erres, DegreePartition, Height, Parallel, ParallelKind,
    ParallelLayout,
};
pub use polynomial::{
    expand, factors_from_partition, mu_norm_coeff, roots, weyl_norm, ConditionReport,
    DensePolynomial, Factor, FactoredPolynomial, Method, PlanarRootSet,
};
pub use potential::{
    fp, kappa, log_energy, log_potential, parallel_inverse_square, residual, residual_survey,
    EnergyReport, ResidualReport,
};
pub use quadrature::{mu_norm_spherical, sphere_grid, QuadratureGrid};
pub use sphere::{
    build_points, stereo_to_plane, stereo_to_sphere, PlanePoint, ProbeSampler, SpherePoint,
    SpherePointSet,
};
pub use sweep::SweepRow;

/// Everything derived from one degree decomposition.
#[derive(Debug, Clone)]
pub struct Construction {
    pub partition: DegreePartition,
    pub layout: ParallelLayout,
    pub points: SpherePointSet,
    pub polynomial: FactoredPolynomial,
}

impl Construction {
    pub fn from_partition(partition: DegreePartition) -> Self {
        let layout = layout(&partition);
        let points = build_points(&layout);
        let polynomial = factors_from_partition(&partition, &layout);
        Self {
            partition,
            layout,
            points,
            polynomial,
        }
    }

    /// The default decomposition of [`partition_erres`].
    pub fn erres(n: i64) -> Result<Self> {
        Ok(Self::from_partition(partition_erres(n)?))
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// Spherical condition number on the default grid.
    pub fn mu_spherical(&self) -> Result<ConditionReport> {
        let (l, k) = quadrature::default_grid_size(self.degree());
        mu_norm_spherical(&self.points, &sphere_grid(l, k)?)
    }

    pub fn mu_coefficient(&self) -> Result<ConditionReport> {
        mu_norm_coeff(&self.polynomial, polynomial::DEFAULT_PRECISION_BITS)
    }
}
