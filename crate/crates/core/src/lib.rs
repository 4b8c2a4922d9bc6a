//! Exact unitaries of Grover search and the quantum Fourier transform, their
//! coherent perturbations, and the spectral and dynamical diagnostics used to
//! tell chaotic from integrable behavior.

pub mod algorithms;
pub mod chaometrics;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod perturbations;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix, EigenSystem, Field, StateVector};
