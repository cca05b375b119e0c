//! Structural physical approximations, multi-copy observables and moment-based
//! spectrum estimation for finite-dimensional quantum states.
//!
//! Matrices are dense, row-major and complex. Tensor products put the leftmost
//! factor on the most significant index.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod multicopy;
pub mod nogo;
pub mod rng;
pub mod spectrum;
pub mod states;
pub mod tolerance;

pub use channels::{ChoiMatrix, HermitianMap, KrausMap, SpaResult};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEig};
pub use multicopy::{Budget, FactorPermutation, MulticopyObservable};
pub use num_complex::Complex64;
pub use rng::Rng;
pub use states::DensityMatrix;
pub use tolerance::Tolerances;
