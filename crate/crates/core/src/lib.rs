//! Exact arithmetic for K3-type lattices with real multiplication.
//!
//! The crate builds the rational trace lattice of a quadratic space over a
//! totally real field, checks its discriminant and embeddability invariants,
//! and computes the quaternion, Brauer and Clifford data together with the
//! `SL2^d` character bookkeeping of the attached Kuga-Satake varieties.

pub mod arith;
pub mod clifford;
pub mod coreslat;
pub mod dictionary;
pub mod error;
pub mod kquad;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod quat;
pub mod rational;
pub mod repwt;
pub mod sample;
pub mod snf;

pub use error::{Error, Result};
pub use numfield::{FieldElement, NumberField};
pub use rational::Rational;
