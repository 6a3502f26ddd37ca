pub mod error;
pub mod hopf;
pub mod duality;
pub mod galois;
pub mod linalg;
pub mod poisson;
pub mod repcat;
pub mod report;
pub mod ydalg;

pub use error::{Error, HalfInt, Result};
