use rayon::prelude::*;

use super::{check_qubit_params, qubit_closed_unchecked, Hamiltonian};
use crate::channels::{ErgodicChannel, SINGULAR_P};
use crate::error::{Error, Result};
use crate::nonmarkov::trapezoid;

/// Points of the coarse grid over `z ∈ [−1, 1]` in [`max_ergotropy_state`].
pub const MAX_GRID: usize = 1001;

/// Bracket width at which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-10;

/// Maximum over input states of the ergotropy after `Λ_p`, searched over pure
/// states `r = 1` as a function of `z`. Returns `(z_opt, W_max)`.
pub fn max_ergotropy_state(z_tau: f64, p: f64, e: f64) -> Result<(f64, f64)> {
    check_qubit_params(z_tau, p, e)?;
    let f = |z: f64| qubit_closed_unchecked(1.0, z, z_tau, p, e);
    let step = 2.0 / (MAX_GRID - 1) as f64;
    let z_at = |k: usize| {
        if k == MAX_GRID - 1 {
            1.0
        } else {
            -1.0 + k as f64 * step
        }
    };
    let mut best_k = 0;
    let mut best = f(-1.0);
    for k in 1..MAX_GRID {
        let v = f(z_at(k));
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let (mut lo, mut hi) = (
        z_at(best_k.saturating_sub(1)),
        z_at((best_k + 1).min(MAX_GRID - 1)),
    );
    let mut candidates = vec![(z_at(best_k), best), (lo, f(lo)), (hi, f(hi))];
    let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > REFINE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    candidates.push((mid, f(mid)));
    Ok(candidates.into_iter().fold(
        (0.0, f64::NEG_INFINITY),
        |acc, c| if c.1 > acc.1 { c } else { acc },
    ))
}

/// `d/dt W_max(t)`: the raw derivative and the measure value `max(0, ·)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaW {
    pub t: f64,
    pub w_max: f64,
    pub raw: f64,
    pub value: f64,
}

struct QubitSetup {
    z_tau: f64,
    e: f64,
}

fn qubit_setup(channel: &ErgodicChannel, h: &Hamiltonian) -> Result<QubitSetup> {
    if channel.dim() != 2 {
        return Err(Error::UnsupportedDimension(channel.dim()));
    }
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: h.dim(),
        });
    }
    let pops = channel.tau_populations();
    let z_tau = pops[0] - pops[1];
    let e = h.energies()[1] - h.energies()[0];
    check_qubit_params(z_tau, 0.5, e)?;
    Ok(QubitSetup { z_tau, e })
}

fn w_max_at(channel: &ErgodicChannel, setup: &QubitSetup, t: f64) -> Result<f64> {
    let p = channel.schedule().p(t)?.clamp(0.0, 1.0);
    Ok(max_ergotropy_state(setup.z_tau, p, setup.e)?.1)
}

fn sigma_w_with(channel: &ErgodicChannel, setup: &QubitSetup, t: f64) -> Result<SigmaW> {
    channel.schedule().eval_regular(t)?;
    let h = 1e-6 * t.max(1.0);
    let w = w_max_at(channel, setup, t)?;
    let raw = if t >= h {
        (w_max_at(channel, setup, t + h)? - w_max_at(channel, setup, t - h)?) / (2.0 * h)
    } else {
        let w1 = w_max_at(channel, setup, t + h)?;
        let w2 = w_max_at(channel, setup, t + 2.0 * h)?;
        (4.0 * w1 - 3.0 * w - w2) / (2.0 * h)
    };
    if !raw.is_finite() {
        return Err(Error::NonFinite(t));
    }
    Ok(SigmaW {
        t,
        w_max: w,
        raw,
        value: raw.max(0.0),
    })
}

/// `σ_W(t)` for a qubit channel with passive fixed point, by central
/// differences of [`max_ergotropy_state`] with step `1e−6·max(1, t)`.
pub fn sigma_w(channel: &ErgodicChannel, h: &Hamiltonian, t: f64) -> Result<SigmaW> {
    sigma_w_with(channel, &qubit_setup(channel, h)?, t)
}

/// Printed closed-form expression for `σ_W` at `(p, ṗ)`, kept for
/// comparison with the numeric derivative. Diverges as `p → 1`.
pub fn sigma_w_reference(p: f64, pdot: f64, z_tau: f64, e: f64) -> f64 {
    let root = ((p + 1.0) / (1.0 - p) + z_tau * z_tau).sqrt();
    let bracket = (1.0 + 4.0 * p + 2.0 * p * p) * z_tau
        + (p * (1.0 + p) / ((1.0 - p) * (1.0 - p)) - z_tau * z_tau) / root;
    0.5 * e * bracket * pdot / ((1.0 + p) * (1.0 + p))
}

/// `W_max`, `σ_W` and the integrated measure over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgotropyTrace {
    pub times: Vec<f64>,
    pub w_max: Vec<f64>,
    pub sigma_w: Vec<f64>,
    pub sigma_w_raw: Vec<f64>,
    pub n_w_cumulative: Vec<f64>,
    /// `N_W/(1 + N_W)` with `N_W` the final cumulative value.
    pub script_n_w: f64,
}

impl ErgotropyTrace {
    pub fn n_w(&self) -> f64 {
        self.n_w_cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Evaluates `σ_W` at every grid point (in parallel) and integrates
/// `max(0, σ_W)` with the trapezoid rule.
pub fn nm_measure(
    channel: &ErgodicChannel,
    h: &Hamiltonian,
    grid: &[f64],
) -> Result<ErgotropyTrace> {
    let setup = qubit_setup(channel, h)?;
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be increasing".into(),
        ));
    }
    let schedule = channel.schedule();
    let bad: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&t| schedule.p(t).is_ok_and(|p| p <= SINGULAR_P))
        .collect();
    if !bad.is_empty() {
        return Err(Error::SingularGrid(bad));
    }
    let points = grid
        .par_iter()
        .map(|&t| sigma_w_with(channel, &setup, t))
        .collect::<Result<Vec<_>>>()?;
    let sigma: Vec<f64> = points.iter().map(|s| s.value).collect();
    let mut cumulative = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    for k in 0..grid.len() {
        if k > 0 {
            acc += trapezoid(&grid[k - 1..=k], &sigma[k - 1..=k]);
        }
        cumulative.push(acc);
    }
    Ok(ErgotropyTrace {
        times: grid.to_vec(),
        w_max: points.iter().map(|s| s.w_max).collect(),
        sigma_w_raw: points.iter().map(|s| s.raw).collect(),
        sigma_w: sigma,
        n_w_cumulative: cumulative,
        script_n_w: acc / (1.0 + acc),
    })
}
