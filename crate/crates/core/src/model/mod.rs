//! Permutations, the persistent-error comparison oracle and dislocation.

mod dislocation;
mod generate;
pub mod io;
mod oracle;
pub(crate) mod permutation;

pub use dislocation::{dislocation, DislocationReport};
pub use generate::{generate_permutation, PermutationKind};
pub use oracle::{splitmix64, ComparisonOracle, Observed, OracleConfig, OracleMode};
pub use permutation::Permutation;
