//! Exact calculus of descent operators on finite state spaces.
//!
//! The crate is organized around a handful of exact-arithmetic domain types
//! (`FiniteSpace`, `ScalarField`, `Generator`, `NeighborhoodSystem`) and a
//! composable operator evaluator (`OperatorHandle`) mapping scalar fields to
//! extended nonnegative fields. On top of those sit:
//!
//! * [`axioms`] — exhaustive grid audits of the descent-modulus axioms
//!   (minimum preservation, monotonicity, scalar monotonicity) plus
//!   translation invariance and homogeneity;
//! * [`critical`] — critical sets, the descent preorder, order minima and
//!   brute-force oracles for the comparison/determination theorems;
//! * [`markov`] — oriented generators, exact limit laws of the induced jump
//!   process and seeded trajectory simulation;
//! * [`classify`] — extraction of active neighborhood systems from critical
//!   maps, the `Z1`–`Z5` audits and classification of homogeneous operators.
//!
//! All arithmetic outside of Monte-Carlo simulation is exact: values are
//! big rationals, extended with radicals of rationals where fractional
//! powers appear, so criticality (`T[f](x) = 0`) is always an exact test.

// index loops mirror the matrix notation throughout
#![allow(clippy::needless_range_loop)]

pub mod axioms;
pub mod classify;
pub mod critical;
pub mod error;
pub mod exact;
pub mod exec;
pub mod fgrid;
pub mod field;
pub mod generator;
pub mod linalg;
pub mod markov;
pub mod neighbors;
pub mod ops;
pub mod samples;
pub mod space;
pub mod spacespec;

pub use error::Error;
pub use exact::{parse_rat, rat_to_string, Exact, Rat, Xval};
pub use fgrid::FunctionGrid;
pub use field::{ExtendedField, ScalarField};
pub use generator::{Generator, MeasureMatrix, MetricMatrix};
pub use neighbors::NeighborhoodSystem;
pub use ops::{DescentOperator, OperatorHandle};
pub use space::FiniteSpace;
