use num_complex::Complex64;

use super::eigen::{eig_hermitian, trace_norm};
use super::matrix::{pauli, ComplexMatrix};
use crate::error::{Error, Result};

/// Eigenvalues in `[-NEGATIVE_CLIP, 0)` are treated as round-off and clipped.
pub const NEGATIVE_CLIP: f64 = 1e-12;

const INPUT_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-8;

/// A Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Every constructor symmetrizes its input and clips eigenvalues in
/// `[-1e-12, 0)` to zero before renormalizing the trace, so a stored state is
/// Hermitian to machine precision and has no negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `m` as a state (Hermitian and unit trace within `1e-10`).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::normalize(m, INPUT_TOL)
    }

    /// Re-projects a matrix that drifted slightly off the state manifold, as
    /// produced by a numerical integrator. Accepts Hermiticity and trace
    /// defects up to `1e-8`.
    pub fn project(m: ComplexMatrix) -> Result<Self> {
        Self::normalize(m, DRIFT_TOL)
    }

    fn normalize(m: ComplexMatrix, tol: f64) -> Result<Self> {
        m.ensure_square()?;
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let h = m.hermitian_part();
        let eig = eig_hermitian(&h)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -NEGATIVE_CLIP {
            return Err(Error::NotPositive(min));
        }
        let matrix = if min < 0.0 {
            eig.reconstruct_with(|v| v.max(0.0))
        } else {
            h
        };
        let tr = matrix.trace().re;
        Ok(Self {
            matrix: matrix.scale_real(1.0 / tr).hermitian_part(),
        })
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidArgument("empty probability list".into()));
        }
        if let Some(&neg) = probabilities.iter().find(|&&p| p < 0.0) {
            return Err(Error::NotPositive(neg));
        }
        Self::new(ComplexMatrix::from_real_diagonal(probabilities))
    }

    /// `|ψ⟩⟨ψ|` for a normalized (or normalizable) vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            matrix: ComplexMatrix::basis_outer(dim, k, k),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix)
            .expect("density matrices are Hermitian")
            .values
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.matrix.max_off_diagonal() <= tol
    }

    pub fn expectation(&self, observable: &ComplexMatrix) -> Complex64 {
        self.matrix.trace_product(observable)
    }

    pub fn from_bloch(v: BlochVector) -> Self {
        bloch_to_density(v)
    }

    pub fn to_bloch(&self) -> Result<BlochVector> {
        density_to_bloch(self)
    }
}

/// Trace distance `½‖ρ₁ − ρ₂‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = a.matrix() - b.matrix();
    Ok((0.5 * trace_norm(&diff)?).clamp(0.0, 1.0))
}

/// Qubit Bloch vector with `ρ = ½(I + xσ₁ + yσ₂ + zσ₃)`; `z = +1` is `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        let len = v.length();
        if !len.is_finite() || len > 1.0 + 1e-12 {
            return Err(Error::InvalidBloch(len));
        }
        Ok(v)
    }

    pub fn length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn neg(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

pub fn bloch_to_density(v: BlochVector) -> DensityMatrix {
    let mut m = pauli(0);
    for (k, c) in [(1, v.x), (2, v.y), (3, v.z)] {
        m += &pauli(k).scale_real(c);
    }
    DensityMatrix::new(m.scale_real(0.5)).expect("valid Bloch vectors map to states")
}

pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    BlochVector::new(
        2.0 * m[(1, 0)].re,
        2.0 * m[(1, 0)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::random::{random_bloch, random_density};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bloch_anchors() {
        let mixed = bloch_to_density(BlochVector::new(0.0, 0.0, 0.0).unwrap());
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-15
        );
        let up = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0).unwrap());
        assert!(
            up.matrix()
                .max_abs_diff(DensityMatrix::basis(2, 0).matrix())
                < 1e-15
        );
        let v = bloch_to_density(BlochVector::new(0.5, 0.0, 0.5).unwrap());
        let m = v.matrix();
        assert!((m[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((m[(1, 1)].re - 0.25).abs() < 1e-15);
        assert!((m[(0, 1)] - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((m[(1, 0)] - Complex64::new(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bloch_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let v = random_bloch(&mut rng);
            let back = density_to_bloch(&bloch_to_density(v)).unwrap();
            assert!((back.x - v.x).abs() < 1e-12);
            assert!((back.y - v.y).abs() < 1e-12);
            assert!((back.z - v.z).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_errors() {
        assert!(matches!(
            BlochVector::new(1.0, 1.0, 0.0),
            Err(Error::InvalidBloch(_))
        ));
        let qutrit = DensityMatrix::maximally_mixed(3);
        assert!(density_to_bloch(&qutrit).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let one = DensityMatrix::basis(2, 1);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn trace_distance_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 2..=4 {
            for _ in 0..50 {
                let (a, b, c) = (
                    random_density(&mut rng, d),
                    random_density(&mut rng, d),
                    random_density(&mut rng, d),
                );
                let ab = trace_distance(&a, &b).unwrap();
                let bc = trace_distance(&b, &c).unwrap();
                let ac = trace_distance(&a, &c).unwrap();
                assert!(ac <= ab + bc + 1e-12);
                assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constructor_clips_round_off() {
        let mut m = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-13, -5e-13]);
        m[(0, 1)] = Complex64::new(0.0, 1e-14);
        m[(1, 0)] = Complex64::new(0.0, -1e-14);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.eigenvalues().iter().all(|&v| v >= -1e-16));
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        assert_eq!(rho.matrix().hermiticity_defect(), 0.0);
    }

    #[test]
    fn constructor_rejects_invalid() {
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(neg),
            Err(Error::NotPositive(_))
        ));
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.6, 0.5]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidState(_))
        ));
        assert!(DensityMatrix::diagonal(&[0.5, 0.5]).is_ok());
    }
}
