//! Additive structure of multiplicative subgroups of prime fields.
//!
//! The crate computes sumsets, representation functions and additive
//! decompositions of the subgroups `A_k = {x^k : x in Z_p^*}`, recognizes
//! generalized arithmetic progressions, counts points on Fermat curves, and
//! runs the verification sweeps exposed by the `subgap` binary.

pub mod cli;
pub mod curves;
pub mod error;
pub mod field;
pub mod report;
pub mod setops;
pub mod structure;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{is_prime, PrimeField, SubgroupSpec};
pub use setops::{RepProfile, ResidueSet};
pub use structure::{Decomposition, GapDescription};
