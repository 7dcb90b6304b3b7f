pub mod audit;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod kz_local;
pub mod linalg;
pub mod ncseries;
pub mod overconvergent;
pub mod padics;
pub mod words;

pub use error::{Error, Result};
