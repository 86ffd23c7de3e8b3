//! Resource estimation for lattice-model ground-state energy estimation on a
//! surface-code machine: Pauli decompositions, error budgets, T-count models,
//! code-distance planning, a lattice-surgery scheduler for SELECT, and
//! quantum/classical crossover analysis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod budget;
pub mod crossover;
pub mod data;
pub mod error;
pub mod exec;
pub mod gates;
pub mod lattice;
pub mod planner;
pub mod sim;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
