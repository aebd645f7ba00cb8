//! Point enumeration and search on canonical models.
//!
//! * exhaustive 𝔽ₚ-points of the projective model (the hot loop behind the
//!   coverage checks and the Weil-bound sanity tests);
//! * bounded-height search for rational points with a two-prime sieve;
//! * numeric CM-point evaluation through the q-expansions, with rational
//!   reconstruction of the projective coordinates.

mod cm;
mod fp_enum;
mod search;

pub use cm::{evaluate_cm_point, CmEvaluation, CmParams, HeegnerForm};
pub use fp_enum::{enumerate_fp_points, weil_interval, FpPointSet};
pub use search::search_rational_points;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointsError {
    #[error("p = {0} divides the level or is not prime")]
    BadPrime(u64),
    #[error("series does not converge: |q| = {qabs:.4} exceeds {threshold}")]
    NonConvergent { qabs: f64, threshold: f64 },
    #[error("{0} is not a discriminant (need D < 0, D ≡ 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("no Heegner form of discriminant {0} at this level")]
    NoHeegnerForm(i64),
    #[error("model data unusable: {0}")]
    BadModel(String),
}
