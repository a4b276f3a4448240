#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod field;
pub mod flcore;
pub mod lattice;
pub mod oracle;
pub mod potentials;
pub mod quad;

mod dd;

pub use error::{Error, Result};
