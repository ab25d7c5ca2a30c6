use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::ComplexMatrix;

/// Hilbert–Schmidt orthonormal Hermitian basis `{G_i}` of `d × d` matrices:
/// `G₀ = I/√d` followed by the normalized generalized Gell-Mann matrices
/// (symmetric and antisymmetric pairs for each `j < k`, then the diagonal
/// ones). For `d = 2` this is `{I, σ₁, σ₂, σ₃}/√2`.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(ComplexMatrix::identity(dim).scale_real(1.0 / (dim as f64).sqrt()));
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut sym = ComplexMatrix::zeros(dim, dim);
                sym[(j, k)] = Complex64::new(s, 0.0);
                sym[(k, j)] = Complex64::new(s, 0.0);
                elements.push(sym);
                let mut anti = ComplexMatrix::zeros(dim, dim);
                anti[(j, k)] = Complex64::new(0.0, -s);
                anti[(k, j)] = Complex64::new(0.0, s);
                elements.push(anti);
            }
        }
        for l in 1..dim {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; dim];
            diag[..l].iter_mut().for_each(|v| *v = norm);
            diag[l] = -(l as f64) * norm;
            elements.push(ComplexMatrix::from_real_diagonal(&diag));
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `d² × d²` matrix whose columns are `vec(G_n)`; unitary.
    pub fn vectorized_columns(&self) -> ComplexMatrix {
        let n = self.dim * self.dim;
        let cols: Vec<Vec<Complex64>> = self.elements.iter().map(|g| g.vectorize()).collect();
        ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
    }

    /// Coordinates `r_n = Tr[G_n X]`.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<Complex64> {
        self.elements.iter().map(|g| g.trace_product(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::pauli;

    #[test]
    fn qubit_basis_is_scaled_paulis() {
        let b = HermitianBasis::new(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (g, k) in b.elements().iter().zip(0..4) {
            assert!(g.max_abs_diff(&pauli(k).scale_real(s)) < 1e-15);
        }
    }

    #[test]
    fn orthonormal_and_traceless() {
        for d in 2..=5 {
            let b = HermitianBasis::new(d).unwrap();
            assert_eq!(b.elements().len(), d * d);
            for (i, gi) in b.elements().iter().enumerate() {
                assert_eq!(gi.hermiticity_defect(), 0.0);
                let tr = gi.trace().re;
                if i == 0 {
                    assert!((tr - (d as f64).sqrt()).abs() < 1e-12);
                } else {
                    assert!(tr.abs() < 1e-12);
                }
                for (j, gj) in b.elements().iter().enumerate() {
                    let ip = gi.trace_product(gj);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip.re - expect).abs() < 1e-12 && ip.im.abs() < 1e-12);
                }
            }
        }
        assert!(HermitianBasis::new(1).is_err());
    }
}
