pub mod cli;
pub mod error;
pub mod io;
pub mod limits;
pub mod material;
pub mod regularized;
pub mod sharp;

pub use error::{Error, Result};
