use crate::channels::{ErgodicChannel, SINGULAR_P};
use crate::error::{Error, Result};
use crate::lindblad::{ErgodicGenerator, Superoperator};
use crate::matkernel::{eigvals_hermitian, ComplexMatrix};

/// Default step for the RHP limit.
pub const DEFAULT_DELTA: f64 = 1e-6;

/// Largest accepted RHP step.
pub const MAX_DELTA: f64 = 1e-3;

/// Below this `pₜ` the RHP rate is reported as `+∞`.
pub const RHP_DIVERGENCE_P: f64 = 1e-6;

const CLAMP: f64 = 1e-8;

/// RHP rate at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhpResult {
    pub t: f64,
    pub g_numeric: f64,
    pub g_closed: f64,
    pub delta_used: f64,
    /// `|g(δ) − g(δ/2)|`.
    pub richardson_gap: f64,
}

impl RhpResult {
    pub fn is_divergent(&self) -> bool {
        self.g_numeric.is_infinite()
    }
}

/// Choi matrix `(id ⊗ Φ)|φ⟩⟨φ|` of a superoperator, `|φ⟩ = Σᵢ|ii⟩/√d`.
///
/// Block `(i, j)` is `Φ(|i⟩⟨j|)/d`.
pub fn choi_matrix(map: &Superoperator) -> ComplexMatrix {
    let d = map.dim();
    let mut c = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let image = map
                .apply(&ComplexMatrix::basis_outer(d, i, j))
                .expect("dimension matches");
            for a in 0..d {
                for b in 0..d {
                    c[(i * d + a, j * d + b)] = image[(a, b)] / d as f64;
                }
            }
        }
    }
    c
}

/// `(‖(id ⊗ (id + δL))|φ⟩⟨φ|‖₁ − 1)/δ`, clamped to zero for small negative
/// values.
///
/// With `C` the Choi matrix of `id + δL`, `‖C‖₁ − 1 = (Tr C − 1) + 2Σ_{λ<0}|λ|`
/// and `Tr C − 1 = δ Tr Choi(L)`; the trace part is taken from `L` directly so
/// it does not suffer cancellation against 1.
pub fn rhp_rate(generator: &Superoperator, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= MAX_DELTA) {
        return Err(Error::InvalidArgument(format!(
            "rhp delta must lie in (0, {MAX_DELTA}], got {delta}"
        )));
    }
    let step = Superoperator::identity(generator.dim()).add(&generator.scale(delta));
    let choi = choi_matrix(&step).hermitian_part();
    let negative: f64 = eigvals_hermitian(&choi)?
        .iter()
        .filter(|&&v| v < 0.0)
        .map(|v| -v)
        .sum();
    let g = choi_matrix(generator).trace().re + 2.0 * negative / delta;
    if !g.is_finite() {
        return Err(Error::NonFinite(g));
    }
    if g < 0.0 && g > -CLAMP {
        return Ok(0.0);
    }
    Ok(g)
}

/// Closed-form qubit RHP rate: `(3/2)|ṗ/p|` when `ṗ > 0`, otherwise 0.
pub fn rhp_closed_qubit(p: f64, pdot: f64) -> Result<f64> {
    rhp_closed(2, p, pdot)
}

/// Closed-form RHP rate in dimension `d`: `2(1 − 1/d²)|ṗ/p|` when `ṗ > 0`,
/// otherwise 0. Independent of the fixed point.
pub fn rhp_closed(d: usize, p: f64, pdot: f64) -> Result<f64> {
    if p <= SINGULAR_P {
        return Err(Error::SingularSchedule { t: f64::NAN, p });
    }
    if pdot <= 0.0 {
        return Ok(0.0);
    }
    let d2 = (d * d) as f64;
    Ok(2.0 * (1.0 - 1.0 / d2) * (pdot / p).abs())
}

/// Numeric and closed-form RHP rates of an ergodic channel at time `t`.
///
/// When `pₜ < RHP_DIVERGENCE_P` both values are `+∞`.
pub fn rhp_at(
    generator: &ErgodicGenerator,
    channel: &ErgodicChannel,
    t: f64,
    delta: f64,
) -> Result<RhpResult> {
    let (p, pdot) = channel.schedule().eval(t)?;
    if p < RHP_DIVERGENCE_P {
        return Ok(RhpResult {
            t,
            g_numeric: f64::INFINITY,
            g_closed: f64::INFINITY,
            delta_used: delta,
            richardson_gap: 0.0,
        });
    }
    let l = generator.ddim(p, pdot)?;
    let g = rhp_rate(&l, delta)?;
    let half = rhp_rate(&l, 0.5 * delta)?;
    Ok(RhpResult {
        t,
        g_numeric: g,
        g_closed: rhp_closed(channel.dim(), p, pdot)?,
        delta_used: delta,
        richardson_gap: (g - half).abs(),
    })
}
