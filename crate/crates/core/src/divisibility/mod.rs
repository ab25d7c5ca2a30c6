//! Divisibility of the qubit ergodic channel: the T-matrix, P-divisibility,
//! the Lorentz normal form of `C = T Tᵀ` and infinitesimal divisibility.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matkernel::{eigvals_hermitian, pauli, BlochVector, ComplexMatrix};

/// Margins above this value count as infinitesimally divisible.
pub const MARGIN_TOL: f64 = -1e-12;

/// Affine action of the qubit ergodic channel on `(1, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMatrix {
    pub entries: [[f64; 4]; 4],
    pub b: BlochVector,
    pub p: f64,
}

/// Spectrum of `C = T Tᵀ` and the derived Lorentz singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzForm {
    /// Eigenvalues of `C`, descending.
    pub e: [f64; 4],
    /// `sᵢ = √(e_{i+1}/e₁)`.
    pub s: [f64; 3],
    /// `s_min² − s₁s₂s₃`.
    pub margin: f64,
}

impl TMatrix {
    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(self.entries[i][j], 0.0))
    }

    /// Determinant via cofactor expansion along the first row, with 3×3
    /// minors by the rule of Sarrus. For the ergodic structure this is
    /// `1·(p·p)·p`, bit-identical to `p * p * p`.
    pub fn determinant(&self) -> f64 {
        let m = &self.entries;
        let minor = |c: usize| {
            let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
            let a = |r: usize, k: usize| m[r + 1][cols[k]];
            a(0, 0) * a(1, 1) * a(2, 2) + a(0, 1) * a(1, 2) * a(2, 0) + a(0, 2) * a(1, 0) * a(2, 1)
                - a(0, 2) * a(1, 1) * a(2, 0)
                - a(0, 1) * a(1, 0) * a(2, 2)
                - a(0, 0) * a(1, 2) * a(2, 1)
        };
        (0..4)
            .map(|c| if c % 2 == 0 { 1.0 } else { -1.0 } * m[0][c] * minor(c))
            .sum()
    }

    /// `C = Σᵢⱼ Tᵢⱼ σᵢ ⊗ σⱼ`.
    pub fn choi(&self) -> ComplexMatrix {
        let mut c = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                if self.entries[i][j] != 0.0 {
                    c += &pauli(i).kron(&pauli(j)).scale_real(self.entries[i][j]);
                }
            }
        }
        c
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "p must lie in [0, 1], got {p}"
        )))
    }
}

fn check_full_rank(b_len: f64, p: f64) -> Result<()> {
    check_p(p)?;
    if p == 0.0 {
        return Err(Error::InvalidArgument(
            "p = 0 gives a rank-deficient T-matrix".into(),
        ));
    }
    if !(0.0..=1.0 + 1e-12).contains(&b_len) {
        return Err(Error::InvalidBloch(b_len));
    }
    Ok(())
}

/// T-matrix with first column `(1, (1 − p)b)` and lower-right block `p·I₃`.
pub fn t_matrix(b: BlochVector, p: f64) -> Result<TMatrix> {
    check_p(p)?;
    let q = 1.0 - p;
    let entries = [
        [1.0, 0.0, 0.0, 0.0],
        [q * b.x, p, 0.0, 0.0],
        [q * b.y, 0.0, p, 0.0],
        [q * b.z, 0.0, 0.0, p],
    ];
    Ok(TMatrix { entries, b, p })
}

/// `(det T, det T ≥ 0)`; `det T = p³`.
pub fn p_divisibility(t: &TMatrix) -> (f64, bool) {
    let det = t.determinant();
    (det, det >= 0.0)
}

/// Eigenvalues of `C = T Tᵀ` for `|b| = b_len`, descending:
/// `e₂ = e₃ = p²` and `e₁, e₄ = (S ± √(S² − 4p²))/2` with
/// `S = 1 + p² + (1 − p)²|b|²`.
pub fn c_eigenvalues_closed(b_len: f64, p: f64) -> [f64; 4] {
    let a = (1.0 - p) * b_len;
    let p2 = p * p;
    let s = 1.0 + p2 + a * a;
    let e1 = 0.5 * (s + (s * s - 4.0 * p2).max(0.0).sqrt());
    [e1, p2, p2, p2 / e1]
}

/// Eigenvalues of `T Tᵀ` by direct diagonalization, descending.
pub fn c_eigenvalues_numeric(t: &TMatrix) -> Result<[f64; 4]> {
    let m = t.as_matrix();
    let c = &m * &m.transpose();
    let v = eigvals_hermitian(&c)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Lorentz singular values `s = (p/√e₁, p/√e₁, p/e₁)` and the margin
/// `s₃² − s₁s₂s₃ = p²(1 − p)/e₁²`.
pub fn lorentz_singular_values(b_len: f64, p: f64) -> Result<LorentzForm> {
    check_full_rank(b_len, p)?;
    let e = c_eigenvalues_closed(b_len, p);
    let s = [
        (e[1] / e[0]).sqrt(),
        (e[2] / e[0]).sqrt(),
        (e[3] / e[0]).sqrt(),
    ];
    let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LorentzForm {
        e,
        s,
        margin: s_min * s_min - s[0] * s[1] * s[2],
    })
}

/// `(margin, margin ≥ −1e−12 ∧ s₁s₂s₃ > 0)`.
pub fn infinitesimal_divisibility(b_len: f64, p: f64) -> Result<(f64, bool)> {
    let form = lorentz_singular_values(b_len, p)?;
    let product = form.s[0] * form.s[1] * form.s[2];
    Ok((form.margin, form.margin >= MARGIN_TOL && product > 0.0))
}

/// One grid point of a divisibility scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub b: f64,
    pub p: f64,
    pub s: [f64; 3],
    pub margin: f64,
}

/// Rows of a `(b, p)` scan plus summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityScan {
    pub rows: Vec<ScanRow>,
    pub min_margin: f64,
    /// `(b, p)` at which `min_margin` is attained.
    pub argmin: (f64, f64),
    /// Largest deviation between closed-form and numeric eigenvalues of `C`.
    pub max_eigen_deviation: f64,
    pub all_divisible: bool,
}

/// Scans `b ∈ linspace(0, 1, grid_b)` (outer) and `p = (j + 1)/grid_p`
/// (inner), in that row order.
pub fn divisibility_scan(grid_b: usize, grid_p: usize) -> Result<DivisibilityScan> {
    if grid_b < 2 || grid_p < 2 {
        return Err(Error::InvalidArgument(format!(
            "scan grids need at least 2 points, got {grid_b}×{grid_p}"
        )));
    }
    let results = (0..grid_b * grid_p)
        .into_par_iter()
        .map(|idx| {
            let b = (idx / grid_p) as f64 / (grid_b - 1) as f64;
            let p = ((idx % grid_p) + 1) as f64 / grid_p as f64;
            let form = lorentz_singular_values(b, p)?;
            let t = t_matrix(BlochVector::new(0.0, 0.0, b)?, p)?;
            let numeric = c_eigenvalues_numeric(&t)?;
            let dev = form
                .e
                .iter()
                .zip(numeric)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok((
                ScanRow {
                    b,
                    p,
                    s: form.s,
                    margin: form.margin,
                },
                dev,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut min_margin = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut max_dev = 0.0f64;
    for (row, dev) in &results {
        if row.margin < min_margin {
            min_margin = row.margin;
            argmin = (row.b, row.p);
        }
        max_dev = max_dev.max(*dev);
    }
    Ok(DivisibilityScan {
        rows: results.into_iter().map(|(r, _)| r).collect(),
        min_margin,
        argmin,
        max_eigen_deviation: max_dev,
        all_divisible: min_margin >= MARGIN_TOL,
    })
}
