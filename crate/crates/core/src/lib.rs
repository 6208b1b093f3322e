//! Exact commutator probabilities of finite groups, the Frobenius formula,
//! and weighted character-ratio bounds, all cross-checked against a
//! brute-force oracle at desk scale.

pub mod catalog;
pub mod chartab;
pub mod config;
pub mod error;
pub mod estimator;
pub mod group;
pub mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod perm;
pub mod vchar;

pub use config::{RunConfig, Tolerances};
pub use error::{Error, Result};
