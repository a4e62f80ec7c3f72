//! Exact permutation-group computations for vertex-transitive graphs of order `pq`.
//!
//! The engine ([`perm`], [`group`], [`chain`]) supports the census layers:
//! arithmetic of non-Cayley numbers ([`nc`]), primitive groups of degree `pq`
//! ([`actions`], [`structure`], [`atlas`]), regular subgroups ([`frobenius`]) and
//! invariant graphs ([`graphs`]). [`census`] ties them into the table checks.

pub mod actions;
pub mod atlas;
pub mod census;
pub mod chain;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod graphs;
pub mod group;
pub mod nc;
pub mod perm;
pub mod structure;

pub use chain::{build_chain, point_stabilizer, ChainOptions, StabilizerChain};
pub use error::{Error, Result};
pub use group::{GroupFile, PermGroup};
pub use perm::Permutation;

/// Seed used by every randomized search unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 1;
