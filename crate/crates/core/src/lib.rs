//! Exact-arithmetic toolkit for canonical models of the Atkin-Lehner quotients
//! X₀⁺(N) of prime level and genus 4, 5, 6.
//!
//! The crate covers the computational ingredients surrounding a quadratic
//! Chabauty run on these curves, *except* the p-adic Coleman/height core:
//!
//! * [`exact`] — rationals, univariate/multivariate polynomials over ℚ and 𝔽ₚ,
//!   resultants, discriminants, squarefree parts, rational roots, truncated
//!   Laurent series with precision bookkeeping;
//! * [`genus`] — class numbers of imaginary quadratic orders by reduced-form
//!   counting, fixed-point counts ν(N) of the Fricke involution, genus
//!   formulas for X₀(N) and X₀⁺(N), and the enumeration of all levels of
//!   bounded quotient genus;
//! * [`modeldb`] — the fixture format for canonical models (equations,
//!   q-expansions, known rational points, affine patches, plane models),
//!   exact verification of all of it, and a small newform-data client;
//! * [`planemap`] — evaluation of the patch maps τₓ×τᵧ → Segre → projection →
//!   monicization, and series verification of the plane models;
//! * [`disks`] — residue-disk analysis of plane models (Δ(x), r(x), good/bad
//!   classification) and the 𝔽ₚ coverage check across patches;
//! * [`points`] — exhaustive 𝔽ₚ-point enumeration of the canonical models,
//!   bounded-height rational point search, and numeric CM-point evaluation.
//!
//! All model data lives in JSON fixtures (one file per level) that are checked
//! exactly — rational arithmetic, zero tolerance — before use.

pub mod disks;
pub mod exact;
pub mod genus;
pub mod modeldb;
pub mod planemap;
pub mod points;

pub use exact::rat::Rat;
