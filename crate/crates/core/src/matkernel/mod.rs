//! Dense complex linear algebra: the numerical substrate for the rest of the
//! crate.

mod eigen;
mod matrix;
pub mod random;
mod state;

pub use eigen::{
    eig_hermitian, eigvals_hermitian, matrix_sqrt_psd, singular_values, trace_norm, HermitianEigen,
    HERMITIAN_TOL,
};
pub(crate) use matrix::I;
pub use matrix::{pauli, ComplexMatrix};
pub use state::{
    bloch_to_density, density_to_bloch, trace_distance, BlochVector, DensityMatrix, NEGATIVE_CLIP,
};
