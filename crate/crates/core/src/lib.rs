//! Exact computation and brute-force verification of matching thresholds in
//! k-uniform hypergraphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`binomial`], [`subsets`], [`hypergraph`], [`rational`]: the exact
//!   combinatorics substrate (big-integer binomials, colex k-subsets, the
//!   bitmask hypergraph type with degree and shadow operators).
//! - [`constructions`]: the extremal constructions and `δ(n,k,d)`.
//! - [`interval`] and [`bounds`]: closed-form bound coefficients, evaluated
//!   exactly or as certified rational intervals.
//! - [`solve`]: maximum matching, perfect matching and the exact fractional
//!   matching LP with dual certificate.
//! - [`emc`]: shifting, cross-dependent families and the extremal search for
//!   families with bounded matching number.
//! - [`thresholds`]: brute-force threshold oracles and the finite-n replay of
//!   the fractional-matching proof chain.
//! - [`verify`]: the acceptance battery driven by the CLI.

pub mod binomial;
pub mod bounds;
pub mod constructions;
pub mod emc;
pub mod error;
pub mod hypergraph;
pub mod interval;
pub mod random;
pub mod rational;
pub mod report;
mod search;
pub mod solve;
pub mod subsets;
pub mod thresholds;
pub mod verify;

pub use binomial::binomial;
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Matching, VertexSet, MAX_VERTICES};
pub use rational::Rational;
pub use search::default_node_budget;
