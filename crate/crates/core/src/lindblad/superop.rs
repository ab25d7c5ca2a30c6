use num_complex::Complex64;

use super::basis::HermitianBasis;
use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, I};

/// A linear map on `d × d` matrices, stored as the `d² × d²` matrix acting on
/// column-stacked vectors: `vec(X)[i + j·d] = X[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

/// One dissipative channel `γ (AρA† − ½{A†A, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTerm {
    pub rate: f64,
    pub operator: ComplexMatrix,
}

impl LindbladTerm {
    pub fn new(rate: f64, operator: ComplexMatrix) -> Self {
        Self { rate, operator }
    }
}

impl Superoperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim * dim),
        }
    }

    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.ensure_square()?;
        if n != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: n,
            });
        }
        Ok(Self { dim, matrix })
    }

    /// `−i[H, ·] + Σ γᵢ (Aᵢ · Aᵢ† − ½{Aᵢ†Aᵢ, ·})`.
    ///
    /// `hamiltonian` may be `None`, in which case the coherent part vanishes.
    pub fn from_lindblad(
        dim: usize,
        hamiltonian: Option<&ComplexMatrix>,
        terms: &[LindbladTerm],
    ) -> Result<Self> {
        let id = ComplexMatrix::identity(dim);
        let mut total = Self::zero(dim);
        if let Some(h) = hamiltonian {
            check_operator(dim, h)?;
            // vec(Hρ − ρH) = (I ⊗ H − Hᵀ ⊗ I) vec ρ
            let comm = &id.kron(h) - &h.transpose().kron(&id);
            total.matrix += &comm.scale(-I);
        }
        for term in terms {
            check_operator(dim, &term.operator)?;
            if term.rate == 0.0 {
                continue;
            }
            let a = &term.operator;
            let ada = &a.adjoint() * a;
            let jump = a.conj().kron(a);
            let anti = &id.kron(&ada) + &ada.transpose().kron(&id);
            let d = &jump - &anti.scale_real(0.5);
            total.matrix += &d.scale_real(term.rate);
        }
        Ok(total)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.rows(),
            });
        }
        ComplexMatrix::unvectorize(&self.matrix.mul_vec(&x.vectorize()), self.dim)
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale_real(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `max |Aᵢⱼ − Bᵢⱼ|` between the superoperator matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Matrix elements `F_mn = Tr[G_m Φ(G_n)]` in a Hermitian orthonormal basis.
    pub fn to_basis(&self, basis: &HermitianBasis) -> ComplexMatrix {
        let b = basis.vectorized_columns();
        &(&b.adjoint() * &self.matrix) * &b
    }

    /// Inverse of [`Superoperator::to_basis`].
    pub fn from_basis(basis: &HermitianBasis, f: &ComplexMatrix) -> Result<Self> {
        let b = basis.vectorized_columns();
        Self::from_matrix(basis.dim(), &(&b * f) * &b.adjoint())
    }
}

fn check_operator(dim: usize, op: &ComplexMatrix) -> Result<()> {
    if op.rows() == dim && op.cols() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: dim,
            found: op.rows(),
        })
    }
}
