//! Finite-dimensional quantum channels with partially coherent direct-sum
//! (PCDS) block structure.
//!
//! The crate covers Kraus/Choi/transfer representations, complementary
//! channels, PCDS detection and factories, degradability certificates, and
//! quantum / entanglement-assisted capacities computed through optimizations
//! restricted to the diagonal blocks.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what the thresholds are
//! calibrated for.

pub mod capacity;
pub mod channel;
pub mod degradability;
pub mod error;
pub mod matrix;
pub mod pcds;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = matrix::ComplexMatrix<f64>;
pub type State = matrix::DensityMatrix<f64>;
pub type Channel = channel::KrausChannel<f64>;
pub type Pcds = pcds::PcdsChannel<f64>;
