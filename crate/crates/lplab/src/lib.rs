//! lplab — a desk-scale numerical laboratory for operators on
//! finite-dimensional l^p spaces, 1 < p < ∞.
//!
//! The crate builds the classical finite constructions around shifts,
//! circulants and diagonal operators — quasicentral approximate units,
//! Følner-averaging intertwiners, block-tridiagonal calculus, signed-average
//! direct sums, cubical partitions of unity, Riesz idempotents and
//! similarity splittings — and verifies their quantitative inequalities with
//! certified operator-norm brackets.
//!
//! Every operation is a pure function of its inputs; all randomized searches
//! take explicit seeds, so experiments reproduce byte-for-byte.
//!
//! Start with the runnable examples (`cargo run --example norm_brackets`) or
//! the `lplab` binary (`lplab selftest`).

pub mod error;
pub mod space;
pub mod operator;
pub mod bracket;
pub mod zoo;
pub mod averaging;
pub mod tridiag;
pub mod unconditional;
pub mod geometry;
pub mod splitting;
pub mod obstruction;
pub mod report;
pub mod experiments;

pub use bracket::{op_norm_bounds, op_norm_upper, tail_norms, Effort, NormBracket};
pub use error::{Error, Result};
pub use operator::LpOperator;
pub use space::{IndexLabel, LpVector, PExponent};
