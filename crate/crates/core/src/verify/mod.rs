//! Numerical verification of the distributional identities satisfied by the
//! transported pair density: pointwise transport identities of the collision
//! geometry, the interior-vs-contact-flux balance of the weak formulation,
//! region-by-region integration-by-parts identities, the two-sheet pairing
//! duality for product data, and the first-marginal hierarchy identity.

pub mod battery;
pub mod bbgky;
pub mod chaos;
pub mod conservation;
pub mod region;
pub mod sampling;
pub mod suite;
pub mod weak;

use serde::{Deserialize, Serialize};

use crate::quadrature::Estimate;

pub use bbgky::bbgky_residual;
pub use chaos::{chaos_duality_check, chaos_pointwise_witness, chaos_roles_symmetry_check};
pub use conservation::conservation_checks;
pub use region::{region_identity_check, ConeSide, DerivativeSide, PullbackSide};
pub use suite::{identity_suite, SuiteConfig};
pub use weak::weak_liouville_residual;

/// Provenance attached to every check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckNotes {
    pub seed: u64,
    pub samples: u64,
    pub epsilon: f64,
    pub detail: String,
}

/// Outcome of a single verification: two sides of an identity with their
/// errors, the residual, and the tolerance it was held to.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub left: Estimate,
    pub right: Estimate,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: CheckNotes,
}

impl CheckReport {
    /// Build a report; the pass flag is derived from residual and tolerance.
    pub fn new(
        name: impl Into<String>,
        left: Estimate,
        right: Estimate,
        tolerance: f64,
        notes: CheckNotes,
    ) -> Self {
        let residual = left.value - right.value;
        Self {
            name: name.into(),
            left,
            right,
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
            notes,
        }
    }

    /// Report for a deterministic maximum-deviation check.
    pub fn deviation(
        name: impl Into<String>,
        max_deviation: f64,
        tolerance: f64,
        notes: CheckNotes,
    ) -> Self {
        Self {
            name: name.into(),
            left: Estimate::exact(max_deviation),
            right: Estimate::exact(0.0),
            residual: max_deviation,
            tolerance,
            pass: max_deviation.abs() <= tolerance,
            notes,
        }
    }
}

/// Tolerance for a Monte Carlo residual: three combined standard errors with
/// a small absolute floor for exactly-zero cases.
pub fn mc_tolerance(left: &Estimate, right: &Estimate) -> f64 {
    3.0 * (left.std_err.powi(2) + right.std_err.powi(2)).sqrt() + 1e-12
}
