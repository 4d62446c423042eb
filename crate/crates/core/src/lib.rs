//! Numerical toolkit for the bifundamental fuzzy 2-sphere.
//!
//! The matrix layer is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, which is what every tolerance in the test suite assumes.

pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod grvv;
pub mod harmonics;
pub mod matcore;
pub mod random;
pub mod scalar;
pub mod spectra;
pub mod su2rep;
pub mod superalg;

pub use error::{FuzzError, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type Matrix = matcore::ComplexMatrix<f64>;
pub type Matrix32 = matcore::ComplexMatrix<f32>;
pub type Tol = matcore::Tolerance<f64>;
pub type Grvv = grvv::GrvvSolution<f64>;
pub type Su2 = su2rep::Su2Representation<f64>;
