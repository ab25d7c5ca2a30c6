//! Weyl shift-and-phase operators and mutually unbiased bases in prime
//! dimension.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::ComplexMatrix;

fn root_of_unity(d: usize, power: i64) -> Complex64 {
    let k = power.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / d as f64)
}

/// `W_kl = Σ_m ω^{mk} |m + l⟩⟨m|` with `ω = e^{2πi/d}`; indices are taken
/// mod `d`.
///
/// With this ordering of the shift the operators compose as
/// `W_kl W_rs = ω^{ks} W_{k+r,l+s}` and satisfy `W_kl† = ω^{kl} W_{−k,−l}`.
/// For `d = 2`, `W_01 = σ₁` and `W_10 = σ₃`.
pub fn weyl_operator(d: usize, k: i64, l: i64) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let shift = l.rem_euclid(d as i64) as usize;
    let mut w = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        w[((m + shift) % d, m)] = root_of_unity(d, m as i64 * k);
    }
    Ok(w)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// The `d + 1` mutually unbiased bases of a prime dimension (Wootters–Fields).
///
/// Basis 0 is the computational basis. For odd `d`, basis `a + 1` has vectors
/// `|ψ_l⟩ = d^{−1/2} Σ_m ω^{am² + lm} |m⟩`; for `d = 2` the phases are
/// `i^{am}(−1)^{lm}`, giving the σ₃, σ₁ and σ₂ eigenbases in that order.
pub fn mub_bases(d: usize) -> Result<Vec<Vec<Vec<Complex64>>>> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = Vec::with_capacity(d + 1);
    bases.push(
        (0..d)
            .map(|l| {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[l] = Complex64::new(1.0, 0.0);
                v
            })
            .collect(),
    );
    for a in 0..d {
        let basis = (0..d)
            .map(|l| {
                (0..d)
                    .map(|m| {
                        let phase = if d == 2 {
                            Complex64::new(0.0, 1.0).powu((a * m) as u32)
                                * root_of_unity(2, (l * m) as i64)
                        } else {
                            root_of_unity(d, (a * m * m + l * m) as i64)
                        };
                        phase * norm
                    })
                    .collect()
            })
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// `U_α = Σ_l ω^l P_l^{(α)}` for each of the `d + 1` mutually unbiased bases.
pub fn mub_unitaries(d: usize) -> Result<Vec<ComplexMatrix>> {
    Ok(mub_bases(d)?
        .iter()
        .map(|basis| {
            let mut u = ComplexMatrix::zeros(d, d);
            for (l, v) in basis.iter().enumerate() {
                u += &ComplexMatrix::outer(v, v).scale(root_of_unity(d, l as i64));
            }
            u
        })
        .collect())
}
