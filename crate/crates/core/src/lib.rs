//! Multicommodity flow on series-parallel supply graphs.
//!
//! The crate is organised around a supply/demand graph pair:
//!
//! * [`graph`] and [`instance`] model graphs, weighted instances, cuts,
//!   surplus and pair minors; [`canon`] gives canonical labels for small pairs.
//! * [`spgraph`] recognises series-parallel graphs and derives orientations,
//!   terminals, bracketing and planar embeddings from the decomposition tree.
//! * [`cutcheck`] verifies the cut and Eulerian conditions and enumerates
//!   tight cuts and bubbles.
//! * [`lp`] is an exact rational simplex together with the congestion,
//!   metric and cut-metric programs built on it.
//! * [`sufficiency`] decides cut-sufficiency through odd-spindle minors.
//! * [`routing`] builds integral and half-integral routings.
//!
//! All weights are exact rationals ([`Rational`]).

pub mod canon;
pub mod cutcheck;
mod error;
pub mod fixtures;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod routing;
pub mod spgraph;
pub mod sufficiency;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet, MAX_VERTICES};
pub use instance::{Cut, Instance, Pair, PairMinorStep, StepKind};

/// Arbitrary precision rational used for every capacity, demand and LP value.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a rational from an integer.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Shorthand for `num / den`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
