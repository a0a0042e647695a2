pub mod cli;
pub mod complex;
pub mod corpus;
pub mod cube;
pub mod dsu;
pub mod error;
pub mod frobenius;
pub mod homology;
pub mod leegen;
pub mod linalg;
pub mod linkdiag;
pub mod reduce;
pub mod ssr;
pub mod tangle;
pub mod verify;

pub use error::{Error, Result};
