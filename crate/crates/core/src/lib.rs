//! Approximate longest increasing subsequences when every comparison may be
//! wrong, persistently, with probability `p`.
//!
//! The pipeline is: approximately sort the input with the noisy oracle
//! ([`sort::approx_sort`]), then extract the longest subsequence whose
//! consecutive elements sit at least `2d` apart in that order
//! ([`distant::approx_lis`]). When the order has maximum dislocation at most
//! `d`, the result is truly increasing and within a factor `2d` of optimal.

pub mod adversarial;
pub mod compare;
pub mod distant;
pub mod error;
pub mod experiment;
pub mod lis;
pub mod model;
pub mod seed;
pub mod sort;

pub use compare::{Comparator, Counting, TrueOrder};
pub use distant::{approx_lis, longest_distant_oracle, recipe_lis, validate, DMode, LisResult, ValidityFlags};
pub use error::{Error, Result};
pub use lis::{exact_lis, lis_dp_oracle, ORACLE_CAP};
pub use model::{dislocation, generate_permutation, ComparisonOracle, DislocationReport, Permutation, PermutationKind};
pub use sort::{approx_sort, ApproxOrder, SorterId, SorterSpec};
