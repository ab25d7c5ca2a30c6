//! Generators of the ergodic channel family.
//!
//! Every generator here is `(ṗ/p)` times a fixed superoperator determined by
//! the fixed point, so [`ErgodicGenerator`] builds the unit-rate parts once
//! and rescales them per time point.

use num_complex::Complex64;

use super::superop::{LindbladTerm, Superoperator};
use crate::channels::{ErgodicChannel, ProbabilitySchedule, DIAGONAL_TOL, SINGULAR_P};
use crate::error::{Error, Result};
use crate::matkernel::{pauli, ComplexMatrix, DensityMatrix};

/// `ṗ/p`, rejecting `p ≤ SINGULAR_P`.
pub fn decay_ratio(p: f64, pdot: f64) -> Result<f64> {
    if p <= SINGULAR_P || !p.is_finite() {
        return Err(Error::SingularSchedule { t: f64::NAN, p });
    }
    Ok(pdot / p)
}

/// Unit-rate (`ṗ/p = 1`) generators for one fixed point.
#[derive(Debug, Clone)]
pub struct ErgodicGenerator {
    tau: DensityMatrix,
    ddim: Superoperator,
    elementwise: Superoperator,
    qubit: Option<Superoperator>,
}

impl ErgodicGenerator {
    pub fn new(tau: &DensityMatrix) -> Result<Self> {
        let off = tau.matrix().max_off_diagonal();
        if off > DIAGONAL_TOL {
            return Err(Error::NonDiagonalFixedPoint(off));
        }
        let pops = tau.populations();
        let d = tau.dim();
        if d < 2 {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(Self {
            tau: tau.clone(),
            ddim: unit_ddim(&pops)?,
            elementwise: unit_elementwise(tau),
            qubit: if d == 2 {
                Some(unit_qubit(&pops)?)
            } else {
                None
            },
        })
    }

    pub fn for_channel(ch: &ErgodicChannel) -> Result<Self> {
        Self::new(ch.tau())
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }

    pub fn tau(&self) -> &DensityMatrix {
        &self.tau
    }

    /// The general-dimension generator at `(p, ṗ)`.
    pub fn ddim(&self, p: f64, pdot: f64) -> Result<Superoperator> {
        Ok(self.ddim.scale(decay_ratio(p, pdot)?))
    }

    /// `X ↦ (ṗ/p)(X − Tr(X)τ)`.
    pub fn elementwise(&self, p: f64, pdot: f64) -> Result<Superoperator> {
        Ok(self.elementwise.scale(decay_ratio(p, pdot)?))
    }

    /// The qubit generator with σ₃ dephasing and σ± jumps.
    pub fn qubit(&self, p: f64, pdot: f64) -> Result<Superoperator> {
        let unit = self
            .qubit
            .as_ref()
            .ok_or(Error::UnsupportedDimension(self.dim()))?;
        Ok(unit.scale(decay_ratio(p, pdot)?))
    }

    /// [`ErgodicGenerator::ddim`] evaluated on a schedule, with the time
    /// attached to singularity errors.
    pub fn ddim_at(&self, schedule: &ProbabilitySchedule, t: f64) -> Result<Superoperator> {
        let (p, pdot) = schedule.eval_regular(t)?;
        self.ddim(p, pdot)
    }
}

/// Lindblad terms of the qubit generator at `(p, ṗ)`:
/// rate `−¼ ṗ/p` on σ₃, `−τ₁₁ ṗ/p` on σ₋ = |1⟩⟨0| and `−τ₀₀ ṗ/p` on
/// σ₊ = |0⟩⟨1|.
pub fn qubit_lindblad_terms(tau_populations: &[f64], ratio: f64) -> Vec<LindbladTerm> {
    let (t00, t11) = (tau_populations[0], tau_populations[1]);
    vec![
        LindbladTerm::new(-0.25 * ratio, pauli(3)),
        LindbladTerm::new(-t11 * ratio, ComplexMatrix::basis_outer(2, 1, 0)),
        LindbladTerm::new(-t00 * ratio, ComplexMatrix::basis_outer(2, 0, 1)),
    ]
}

/// Jump terms of the general generator: rate `−τᵢᵢ ṗ/p` on `|i⟩⟨j|` for
/// every ordered pair `i ≠ j`.
pub fn ddim_lindblad_terms(tau_populations: &[f64], ratio: f64) -> Vec<LindbladTerm> {
    let d = tau_populations.len();
    let mut terms = Vec::with_capacity(d * (d - 1));
    for (i, &tau_ii) in tau_populations.iter().enumerate() {
        for j in 0..d {
            if i != j {
                terms.push(LindbladTerm::new(
                    -tau_ii * ratio,
                    ComplexMatrix::basis_outer(d, i, j),
                ));
            }
        }
    }
    terms
}

fn unit_qubit(pops: &[f64]) -> Result<Superoperator> {
    Superoperator::from_lindblad(2, None, &qubit_lindblad_terms(pops, 1.0))
}

fn unit_ddim(pops: &[f64]) -> Result<Superoperator> {
    let d = pops.len();
    let jumps = Superoperator::from_lindblad(d, None, &ddim_lindblad_terms(pops, 1.0))?;
    // Coherence rescaling ρᵢⱼ ↦ ((τᵢᵢ + τⱼⱼ)/2) ρᵢⱼ for i ≠ j, diagonal in
    // the vectorized representation.
    let mut deph = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let idx = i + j * d;
                deph[(idx, idx)] = Complex64::new(0.5 * (pops[i] + pops[j]), 0.0);
            }
        }
    }
    Ok(jumps.add(&Superoperator::from_matrix(d, deph)?))
}

fn unit_elementwise(tau: &DensityMatrix) -> Superoperator {
    let d = tau.dim();
    let vt = tau.matrix().vectorize();
    let vi = ComplexMatrix::identity(d).vectorize();
    let n = d * d;
    let m = ComplexMatrix::from_fn(n, n, |a, b| {
        let id = if a == b { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - vt[a] * vi[b]
    });
    Superoperator::from_matrix(d, m).expect("square by construction")
}

/// Qubit generator at `(p, ṗ)` for a diagonal qubit fixed point.
pub fn generator_qubit(tau: &DensityMatrix, p: f64, pdot: f64) -> Result<Superoperator> {
    if tau.dim() != 2 {
        return Err(Error::UnsupportedDimension(tau.dim()));
    }
    ErgodicGenerator::new(tau)?.qubit(p, pdot)
}

/// General-dimension generator at `(p, ṗ)`:
/// `(ṗ/p)[Σ_{i≠j} ½(τᵢᵢ + τⱼⱼ) ρᵢⱼ|i⟩⟨j| − Σ_{i≠j} τᵢᵢ(|i⟩⟨j|ρ|j⟩⟨i| − ½{|j⟩⟨j|, ρ})]`.
pub fn generator_ddim(tau: &DensityMatrix, p: f64, pdot: f64) -> Result<Superoperator> {
    ErgodicGenerator::new(tau)?.ddim(p, pdot)
}

/// Reference generator `X ↦ (ṗ/p)(X − Tr(X)τ)`; on states this is
/// `ρ̇ᵢⱼ = (ṗ/p)(ρᵢⱼ − τᵢⱼ)`.
pub fn generator_elementwise(tau: &DensityMatrix, p: f64, pdot: f64) -> Result<Superoperator> {
    Ok(unit_elementwise(tau).scale(decay_ratio(p, pdot)?))
}
