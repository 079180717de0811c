//! Desk-scale experiments around double-sided search in invertible random
//! permutations and the one-wayness of the single-round sponge.
//!
//! The crate has three layers:
//!
//! * exact combinatorics of subset pairs over the symmetric group
//!   ([`permgroup`], [`pairs`]), carried out in big-integer rationals so
//!   that enumeration-level claims can be checked with zero error;
//! * oracle constructions, reductions and the sponge one-wayness game
//!   ([`instances`], [`sponge`]), all with auditable query counters;
//! * a statevector simulator for quantum query attacks ([`qsim`]) together
//!   with closed-form ceilings for every success bound ([`bounds`]).
//!
//! Floating-point math is generic over the scalar via [`scalar::Real`]
//! (`f32` or `f64`); the exact layer always uses [`Rational`].

pub mod bounds;
pub mod error;
pub mod instances;
pub mod pairs;
pub mod permgroup;
pub mod qsim;
pub mod scalar;
pub mod sponge;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

/// Exact rational scalar used throughout the combinatorics layer.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision unsigned integer (permutation counts, binomials).
pub type Natural = num_bigint::BigUint;

/// Single-precision statevector.
pub type StateVector32 = qsim::StateVector<f32>;
/// Double-precision statevector; every acceptance-level attack runs on this.
pub type StateVector64 = qsim::StateVector<f64>;
