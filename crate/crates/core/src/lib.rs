//! Numerical laboratory for metric entropy.
//!
//! The crate computes and cross-checks entropy numbers in three settings:
//! finite point clouds under `l_p` norms or explicit distance tables
//! ([`metricspace`]), absolutely convex hulls of finite sets with certified
//! two-sided bounds ([`hull`]), and weakly singular convolution operators on
//! `[0,1]` approached through their kernels ([`kernel`]) and discretizations
//! ([`operator`]). Sequence-space functionals and Hardy-type inequalities
//! ([`seqspace`]) connect the computed entropy sequences to the three-scale
//! rate formulas fitted and evaluated in [`rates`]. The [`cli`] module wires
//! everything into a batch experiment runner.

pub mod cli;
pub mod error;
pub mod hull;
pub mod io;
pub mod kernel;
pub mod metricspace;
pub mod operator;
pub mod quad;
pub mod rates;
pub mod seqspace;

pub use error::{Error, Result};
