//! Lindblad-type generators of ergodic channels, RK4 integration of the
//! master equation and generator extraction from map families.

mod basis;
mod extract;
mod generator;
mod integrate;
mod superop;

pub use basis::HermitianBasis;
pub use extract::{condition_number, extract_generator, DEFAULT_DT, MAX_CONDITION};
pub use generator::{
    ddim_lindblad_terms, decay_ratio, generator_ddim, generator_elementwise, generator_qubit,
    qubit_lindblad_terms, ErgodicGenerator,
};
pub use integrate::{integrate, integrate_ergodic, uniform_grid, Trajectory};
pub use superop::{LindbladTerm, Superoperator};

/// Orthonormal Hermitian basis: `I/√d` followed by generalized Gell-Mann
/// matrices.
pub fn hermitian_basis(d: usize) -> crate::Result<HermitianBasis> {
    HermitianBasis::new(d)
}
