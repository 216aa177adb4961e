//! Bounds on the critical survival probability of the frog model with death
//! on biregular trees, together with Monte Carlo simulators that check every
//! closed form against the process itself.
//!
//! The crate is organized bottom-up:
//!
//! - [`tree`]: lazy addressing of the infinite tree `T(d1, d2)`.
//! - [`law`]: the initial-configuration law `η` (pgf, mean, sampler).
//! - [`hitting`]: killed-walk hitting probabilities `α`, `β` and long-range
//!   edge-open probabilities.
//! - [`pathprob`]: the path-open recursion and its Bernoulli closed form.
//! - [`bounds`]: lower and upper bounds on `p_c`, root finding and the
//!   reference table.
//! - [`sim`]: frog-model, branching-process and disk-percolation simulators.
//! - [`checks`]: named invariant suites.
//! - [`output`] and [`cli`]: CSV/JSON emission and the `frogbi` command line.
//!
//! Runnable walkthroughs for each capability live under `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod checks;
pub mod cli;
pub mod error;
pub mod hitting;
pub mod law;
pub mod output;
pub mod pathprob;
pub mod sim;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
pub use hitting::{HittingPair, Survival, VertexType};
pub use law::InitLaw;
pub use tree::{TreeParams, VertexAddr};
