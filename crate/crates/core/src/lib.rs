//! Generalized inverses of dual matrices and the star-order family on them.

pub mod cli;
pub mod dual;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod ginv;
pub mod io;
pub mod linalg;
pub mod orders;
pub mod synthesis;

pub use dual::{DualMatrix, Matrix, Sign, Tolerances};
pub use error::{Error, Result};
