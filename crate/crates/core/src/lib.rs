//! Exact construction and verification of commuting families built from
//! noncommutative determinants.
//!
//! The crate covers four regimes of the same construction
//! `H_i = Δ₀⁻¹ Δ_i`:
//!
//! - [`ncfam`]: tensor powers of matrix algebras, realized as Kronecker
//!   products over ℚ;
//! - [`poisson`]: rational functions on symplectic powers with the
//!   canonical bracket, plus the Grassmann identities, hyperplane
//!   coordinates and the bracket on differentials of the projective line;
//! - [`weyl`]: rational differential operators in several variables;
//! - [`quantize`]: dual-number deformation and ℏ-adic localization.
//!
//! Everything is exact; no check uses a tolerance.

pub mod error;
pub mod exact;
pub mod ncfam;
pub mod perm;
pub mod poisson;
pub mod quantize;
pub mod rng;
pub mod verdict;
pub mod weyl;

pub use error::{Error, Result};
pub use exact::{Field, MPoly, QMatrix, Rat, RatFunc};
pub use verdict::Verdict;
