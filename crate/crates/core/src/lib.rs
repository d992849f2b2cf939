// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod baselines;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod placement;
pub mod rf;
pub mod scenario;
pub mod seed;
pub mod sim;
pub mod trajectory;

pub use error::{Error, Result};
