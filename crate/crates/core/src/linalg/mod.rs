//! Dense complex linear algebra for unitaries of a few thousand rows at most.

mod eigen;
mod haar;
mod matrix;
mod state;

pub use eigen::{
    default_degeneracy_tolerance, eig_unitary, eig_unitary_with, ClusterBasis, EigOptions,
    EigenSystem,
};
pub use haar::{coe_matrix, haar_orthogonal, haar_unitary};
pub use matrix::{sym_antisym_split, tensor_product, unitarity_defect, ComplexMatrix};
pub use state::{apply, inner, random_state, random_state_seeded, Field, StateVector};

pub use num_complex::Complex64;

/// Tolerance below which a matrix is accepted as unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
