// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod conjugate;
pub mod cramer;
pub mod defaults;
pub mod error;
pub mod numeric;
pub mod operators;
pub mod tentropy;
pub mod tilting;

pub use error::{Error, Result};
