//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral functions built on it.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Input Hermiticity tolerance for [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `M = V diag(λ) V†` of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; `vectors` holds the matching
/// eigenvectors as columns. Each eigenvector is phase-fixed so that its first
/// component of largest modulus is real and positive. Within runs of
/// eigenvalues closer than `1e-12` relative to the matrix scale, eigenvectors
/// are ordered lexicographically by their real parts.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fv[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|v| v)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized to `(M + M†)/2` before rotation; inputs further
/// than [`HERMITIAN_TOL`] from Hermitian are rejected.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.ensure_square()?;
    let defect = m.hermiticity_defect();
    let scale = m.max_abs().max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let total = a.frobenius();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = off_diagonal_norm(&a);
        if off <= f64::EPSILON * 1e-2 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    // Within runs of numerically equal eigenvalues only the vectors are
    // reordered, so the value list stays strictly sorted.
    let tie = 1e-12 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end - 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        if end - start > 1 {
            let mut cluster: Vec<Vec<Complex64>> =
                pairs[start..end].iter().map(|p| p.1.clone()).collect();
            cluster.sort_by(|x, y| lexicographic_real(x, y));
            for (pair, vec) in pairs[start..end].iter_mut().zip(cluster) {
                pair.1 = vec;
            }
        }
        start = end;
    }

    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eig_hermitian(m).map(|e| e.values)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`. The rotation is `J = D R`
/// where `D` removes the phase of `a[p][q]` and `R` is the real Givens
/// rotation of the resulting real symmetric 2×2 block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    // A ← A J
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A ← J† A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

fn fix_phase(col: &mut [Complex64]) {
    let biggest = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = col.iter().find(|z| z.norm() >= biggest * (1.0 - 1e-10)) {
        let rot = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

fn lexicographic_real(x: &[Complex64], y: &[Complex64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        if (a.re - b.re).abs() > 1e-12 {
            return b.re.total_cmp(&a.re);
        }
    }
    Ordering::Equal
}

/// Sum of singular values. Hermitian inputs use `Σ|λᵢ|`; other square inputs
/// use the square roots of the eigenvalues of `M†M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.ensure_square()?;
    let scale = m.max_abs().max(1.0);
    if m.hermiticity_defect() <= 1e-14 * scale {
        return Ok(eigvals_hermitian(m)?.iter().map(|v| v.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}

/// Singular values of a square matrix, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.ensure_square()?;
    let gram = &m.adjoint() * m;
    Ok(eigvals_hermitian(&gram)?
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect())
}

/// Principal square root of a positive-semidefinite matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    if let Some(&min) = eig.values.last() {
        if min < -HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotPositive(min));
        }
    }
    Ok(eig.reconstruct_with(|v| v.max(0.0).sqrt()))
}
