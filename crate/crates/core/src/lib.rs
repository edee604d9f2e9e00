//! Spectral laboratory for Pauli and Dirac operators built from
//! plurisubharmonic polynomial weights.

pub mod criteria;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod measure;
pub mod poly;
pub mod quadrature;
pub mod sparse;
pub mod weights;

pub use error::{Error, Result};
pub use weights::{parse_weight, parse_weight_in, LeviMatrix, WeightSpec};
