//! Maximum likelihood existence, facial sets and extended MLEs for the
//! Holland–Leinhardt p1 model of directed networks.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: design matrices for the three reciprocation variants, network
//!   encodings, sufficient statistics and sample-space enumeration.
//! - [`rational`] and [`lp`]: exact rational arithmetic, rank/kernel
//!   computations and a simplex solver, so that every boundary decision is an
//!   exact zero test.
//! - [`polyhedra`]: facets of marginal cones (double description), vertices
//!   and relative interiors of marginal polytopes.
//! - [`mle`]: existence checks, facial sets and (extended) MLE fitting.
//! - [`census`]: exhaustive enumeration experiments over small networks.
//! - [`cli`]: the `p1geom` command-line front end.

pub mod census;
pub mod cli;
pub mod error;
pub mod lp;
pub mod mle;
pub mod model;
pub mod polyhedra;
pub mod rational;

pub use error::{Error, Result};
pub use model::{DesignMatrix, MarginVector, Network, NetworkFormat, ReciprocityVariant};
pub use rational::Rational;
