use num_complex::Complex64;

use super::schedule::ProbabilitySchedule;
use super::weyl::mub_unitaries;
use crate::error::{Error, Result};
use crate::lindblad::Superoperator;
use crate::matkernel::{eig_hermitian, matrix_sqrt_psd, pauli, ComplexMatrix, DensityMatrix};

/// Off-diagonal tolerance for a fixed point written in its own eigenbasis.
pub const DIAGONAL_TOL: f64 = 1e-12;

/// The channel family `Λₜ(ρ₀) = pₜρ₀ + (1 − pₜ)τ` with a fixed point `τ`
/// that is diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicChannel {
    tau: DensityMatrix,
    schedule: ProbabilitySchedule,
}

impl ErgodicChannel {
    pub fn new(tau: DensityMatrix, schedule: ProbabilitySchedule) -> Result<Self> {
        let off = tau.matrix().max_off_diagonal();
        if off > DIAGONAL_TOL {
            return Err(Error::NonDiagonalFixedPoint(off));
        }
        Ok(Self { tau, schedule })
    }

    /// Builds a channel from an arbitrary fixed point by rotating to its
    /// eigenbasis. States must be mapped with [`FrameRotation::to_frame`]
    /// before being fed to the returned channel.
    pub fn from_fixed_point(
        tau: &DensityMatrix,
        schedule: ProbabilitySchedule,
    ) -> Result<(Self, FrameRotation)> {
        let rotation = FrameRotation::diagonalizing(tau)?;
        let diag = rotation.to_frame(tau)?;
        let diag = DensityMatrix::diagonal(&diag.populations())?;
        Ok((Self::new(diag, schedule)?, rotation))
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }

    pub fn tau(&self) -> &DensityMatrix {
        &self.tau
    }

    /// Diagonal entries `τᵢᵢ`.
    pub fn tau_populations(&self) -> Vec<f64> {
        self.tau.populations()
    }

    pub fn schedule(&self) -> &ProbabilitySchedule {
        &self.schedule
    }

    /// `Λₜ(ρ₀)`.
    pub fn apply(&self, t: f64, rho0: &DensityMatrix) -> Result<DensityMatrix> {
        let p = self.schedule.p(t)?;
        self.apply_with_p(p, rho0)
    }

    /// `pρ₀ + (1 − p)τ` for an explicit `p ∈ [0, 1]`.
    pub fn apply_with_p(&self, p: f64, rho0: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim(), rho0.dim())?;
        check_probability(p)?;
        DensityMatrix::new(affine_combination(p, rho0.matrix(), self.tau.matrix()))
    }

    /// The map `X ↦ pX + (1 − p)Tr(X)τ` on column-stacked matrices.
    pub fn map_superoperator(&self, p: f64) -> Superoperator {
        let d = self.dim();
        let vt = self.tau.matrix().vectorize();
        let vi = ComplexMatrix::identity(d).vectorize();
        let n = d * d;
        let m = ComplexMatrix::from_fn(n, n, |a, b| {
            let id = if a == b { p } else { 0.0 };
            Complex64::new(id, 0.0) + vt[a] * vi[b].conj() * (1.0 - p)
        });
        Superoperator::from_matrix(d, m).expect("square by construction")
    }
}

/// Unitary change of basis that diagonalizes a fixed point:
/// `τ = U diag(τ) U†`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRotation {
    unitary: ComplexMatrix,
}

impl FrameRotation {
    pub fn identity(dim: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(dim),
        }
    }

    pub fn diagonalizing(tau: &DensityMatrix) -> Result<Self> {
        if tau.is_diagonal(DIAGONAL_TOL) {
            return Ok(Self::identity(tau.dim()));
        }
        Ok(Self {
            unitary: eig_hermitian(tau.matrix())?.vectors,
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn is_identity(&self) -> bool {
        self.unitary == ComplexMatrix::identity(self.unitary.rows())
    }

    /// `U†ρU`.
    pub fn to_frame(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.unitary.rows(), rho.dim())?;
        DensityMatrix::new(&(&self.unitary.adjoint() * rho.matrix()) * &self.unitary)
    }

    /// `UρU†`.
    pub fn from_frame(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.unitary.rows(), rho.dim())?;
        DensityMatrix::new(&(&self.unitary * rho.matrix()) * &self.unitary.adjoint())
    }
}

/// Qubit operator-sum form `pρ₀ + (1 − p) Σ_α A σ_α ρ₀ σ_α A†` with
/// `A = √(τ/2)`.
pub fn apply_ergodic_kraus_qubit(
    tau: &DensityMatrix,
    p: f64,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    if tau.dim() != 2 {
        return Err(Error::UnsupportedDimension(tau.dim()));
    }
    check_dims(2, rho0.dim())?;
    check_probability(p)?;
    let a = matrix_sqrt_psd(&tau.matrix().scale_real(0.5))?;
    let a_dag = a.adjoint();
    let mut reset = ComplexMatrix::zeros(2, 2);
    for alpha in 0..4 {
        let s = pauli(alpha);
        reset += &(&(&(&(&a * &s) * rho0.matrix()) * &s) * &a_dag);
    }
    DensityMatrix::new(affine_combination(p, rho0.matrix(), &reset))
}

/// Operator-sum form built from a complete set of mutually unbiased bases in
/// prime dimension `d`:
///
/// `pρ₀ + (1 − p) A [ρ₀ + Σ_α c_α Σ_{k=1}^{d−1} U_α^k ρ₀ U_α^{−k}] A†`,
/// `A = √(τ/d)`,
///
/// where `weights` holds the `d + 1` coefficients `c_α`. With all `c_α = 1`
/// the bracket equals `d·Tr(ρ₀)·I` and the map coincides with the affine form.
/// Other weights generally break that identity; the deviation can be measured
/// against [`ErgodicChannel::apply_with_p`].
pub fn apply_ergodic_mub(
    tau: &DensityMatrix,
    p: f64,
    weights: &[f64],
    rho0: &DensityMatrix,
) -> Result<ComplexMatrix> {
    let d = tau.dim();
    check_dims(d, rho0.dim())?;
    check_probability(p)?;
    let unitaries = mub_unitaries(d)?;
    if weights.len() != unitaries.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} basis weights, got {}",
            unitaries.len(),
            weights.len()
        )));
    }
    let mut bracket = rho0.matrix().clone();
    for (u, &c) in unitaries.iter().zip(weights) {
        let u_dag = u.adjoint();
        let (mut uk, mut uk_dag) = (u.clone(), u_dag.clone());
        for _ in 1..d {
            bracket += &(&(&uk * rho0.matrix()) * &uk_dag).scale_real(c);
            uk = &uk * u;
            uk_dag = &u_dag * &uk_dag;
        }
    }
    let a = matrix_sqrt_psd(&tau.matrix().scale_real(1.0 / d as f64))?;
    let reset = &(&a * &bracket) * &a.adjoint();
    Ok(affine_combination(p, rho0.matrix(), &reset))
}

fn affine_combination(p: f64, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &a.scale_real(p) + &b.scale_real(1.0 - p)
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}
