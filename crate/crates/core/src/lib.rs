//! Qualitative simulation over finite relation calculi, built on a
//! finite-domain constraint solver.
//!
//! The engine models the qualitative relation between each pair of objects at
//! each time point as a constraint variable ranging over the relations of a
//! calculus (topology, cardinal directions, or user-defined). Domain knowledge
//! is written in a temporal logic with past and future operators, compiled
//! into constraints over the staged relation variables, and simulations are
//! found by iteratively extending the horizon and searching the resulting
//! constraint store. Because horizons are tried in increasing order, the
//! first simulation found is a shortest one.
//!
//! The crate is split along those lines:
//!
//! - [`calculus`]: relation calculi as data (converse, composition,
//!   conceptual neighbourhood) plus validation of their algebra;
//! - [`csp`]: the constraint store, hyper-arc-consistency propagation and
//!   backtracking search;
//! - [`temporal`]: formula AST, parser, normal forms and the reference
//!   evaluator used as the ground-truth oracle in tests;
//! - [`translate`]: compilation of temporal formulas into constraints, both
//!   by unfolding over time points and via array (element) constraints;
//! - [`simulate`]: stage construction, inter-state rules, horizon iteration
//!   and the independent trace validator.
//!
//! The crate is `no_std` (with `alloc`); anything that touches files, wall
//! clocks or process state lives in the companion `qsim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod calculus;
pub mod csp;
pub mod simulate;
pub mod temporal;
pub mod testing;
pub mod translate;
