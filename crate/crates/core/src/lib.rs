pub mod audit;
pub mod error;
pub mod experiments;
pub mod function;
pub mod lanczos;
pub mod linalg;
pub mod matfun;
pub mod poly;
pub mod rational;
pub mod solvers;
pub mod streaming;
pub mod tridiag;

pub use error::{Error, Result};
