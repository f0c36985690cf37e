#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod dispersion;
pub mod elliptic;
pub mod error;
pub mod gauss;
pub mod golden;
pub mod hill;
pub mod instanton;
pub mod param;
pub mod riccati;
pub mod rings;
pub mod series;

pub use error::{ForgeError, Result};
