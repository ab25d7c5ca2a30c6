//! Ergotropy, passive and active states, and the ergotropy-based
//! non-Markovianity measure of qubit ergodic channels.

mod measure;

pub use measure::{
    max_ergotropy_state, nm_measure, sigma_w, sigma_w_reference, ErgotropyTrace, SigmaW, MAX_GRID,
    REFINE_TOL,
};

use crate::error::{Error, Result};
use crate::matkernel::{BlochVector, ComplexMatrix, DensityMatrix};

/// `H = Σᵢ εᵢ|i⟩⟨i|` with ascending energies.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    energies: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidArgument(
                "hamiltonian needs at least one level".into(),
            ));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument("energies must be finite".into()));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("energies must be ascending".into()));
        }
        Ok(Self { energies })
    }

    /// `H = e|1⟩⟨1|`.
    pub fn qubit(e: f64) -> Result<Self> {
        Self::new(vec![0.0, e])
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.energies)
    }

    /// `Tr(ρH)`.
    pub fn energy(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check(rho)?;
        Ok(rho
            .populations()
            .iter()
            .zip(&self.energies)
            .map(|(p, e)| p * e)
            .sum())
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            })
        }
    }
}

/// Eigenvalues of `ρ` in non-increasing order placed on the ascending
/// energy levels.
pub fn passive_state(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    h.check(rho)?;
    DensityMatrix::diagonal(&clipped_eigenvalues(rho))
}

/// Eigenvalues of `ρ` in non-decreasing order placed on the ascending
/// energy levels.
pub fn active_state(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    h.check(rho)?;
    let mut lambda = clipped_eigenvalues(rho);
    lambda.reverse();
    DensityMatrix::diagonal(&lambda)
}

fn clipped_eigenvalues(rho: &DensityMatrix) -> Vec<f64> {
    rho.eigenvalues().into_iter().map(|v| v.max(0.0)).collect()
}

fn paired_energy(lambda: &[f64], energies: &[f64]) -> f64 {
    lambda.iter().zip(energies).map(|(l, e)| l * e).sum()
}

/// `W(ρ) = Tr(ρH) − min_U Tr(UρU†H)`.
pub fn ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let lambda = clipped_eigenvalues(rho);
    Ok((h.energy(rho)? - paired_energy(&lambda, h.energies())).max(0.0))
}

/// `max_U Tr(UρU†H) − Tr(ρH)`.
pub fn anti_ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let mut lambda = clipped_eigenvalues(rho);
    lambda.reverse();
    Ok((paired_energy(&lambda, h.energies()) - h.energy(rho)?).max(0.0))
}

pub(crate) fn check_qubit_params(z_tau: f64, p: f64, e: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&z_tau) {
        return Err(Error::InvalidArgument(format!(
            "z_tau must lie in [0, 1] for a passive fixed point, got {z_tau}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    if !(e >= 0.0 && e.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy gap must be ≥ 0, got {e}"
        )));
    }
    Ok(())
}

/// Ergotropy of `Λ(ρ) = pρ + (1 − p)τ` for a qubit with Bloch vector `r`,
/// `τ` diagonal with Bloch component `z_τ ≥ 0`, and `H = e|1⟩⟨1|`:
///
/// `W = (e/2)[√(p²(r² − z²) + (pz + (1 − p)z_τ)²) − pz − (1 − p)z_τ]`.
pub fn ergotropy_qubit_closed(r: BlochVector, z_tau: f64, p: f64, e: f64) -> Result<f64> {
    check_qubit_params(z_tau, p, e)?;
    Ok(qubit_closed_unchecked(r.length(), r.z, z_tau, p, e))
}

/// The closed form with `r = |r|` and `z` given separately.
pub(crate) fn qubit_closed_unchecked(r: f64, z: f64, z_tau: f64, p: f64, e: f64) -> f64 {
    let transverse = (p * p * (r * r - z * z)).max(0.0);
    let b = p * z + (1.0 - p) * z_tau;
    let root = (transverse + b * b).sqrt();
    let w = if b > 0.0 {
        if root + b == 0.0 {
            0.0
        } else {
            transverse / (root + b)
        }
    } else {
        root - b
    };
    (0.5 * e * w).max(0.0)
}
