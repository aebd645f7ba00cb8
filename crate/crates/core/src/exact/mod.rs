//! Exact arithmetic foundation: arbitrary-precision rationals, dense univariate
//! and sparse multivariate polynomials over ℚ and over prime fields, resultants
//! and discriminants, squarefree parts, root finding, and truncated Laurent
//! series with explicit precision bookkeeping.

pub mod fp;
pub mod multipoly;
pub mod rat;
pub mod resultant;
pub mod roots;
pub mod series;
pub mod unipoly;

pub use fp::{Fp, FpPoly};
pub use multipoly::{MultiPoly, MultiPolyFp};
pub use rat::Rat;
pub use resultant::{discriminant_y, discriminant_y_fp};
pub use roots::{rational_roots, roots_mod_p};
pub use series::TruncatedLaurent;
pub use unipoly::RatPoly;

use thiserror::Error;

/// Errors from the exact-arithmetic layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Operands live over different coefficient domains (e.g. 𝔽₅ vs 𝔽₇).
    #[error("coefficient domain mismatch: modulus {0} vs {1}")]
    DomainMismatch(u64, u64),
    /// The operation is undefined for this input (zero polynomial, constant in y, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    /// A denominator is divisible by p, so the value has no reduction mod p.
    #[error("coefficient is not {p}-integral")]
    NotPIntegral { p: u64 },
    /// The modulus passed to a prime-field constructor is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),
}
