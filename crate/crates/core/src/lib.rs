// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casimir;
pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod materials;
pub mod optics;
pub mod quadrature;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
