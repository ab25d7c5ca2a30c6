use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{ErgodicChannel, ProbabilitySchedule};
use crate::error::{Error, Result};
use crate::matkernel::random::random_pure_state;
use crate::matkernel::{trace_distance, BlochVector, DensityMatrix};

/// Default number of sampled initial pairs for a qubit.
pub const DEFAULT_BLP_SAMPLES: usize = 512;

/// Number of Haar pure pairs sampled when `d > 2`.
pub const HAAR_PAIRS: usize = 1024;

/// Grid resolution used by [`backflow_windows`].
pub const WINDOW_GRID: usize = 10_000;

/// BLP rate at one time point.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpResult {
    pub t: f64,
    /// Largest sampled `d/dt D(ρ₁(t), ρ₂(t))`.
    pub b_numeric: f64,
    /// Supremum over all pairs, `ṗₜ`.
    pub b_closed: f64,
    /// Bloch vectors of the maximizing pair (qubits only).
    pub maximizing_pair: Option<(BlochVector, BlochVector)>,
}

impl BlpResult {
    /// `max(0, b_numeric)`.
    pub fn backflow(&self) -> f64 {
        self.b_numeric.max(0.0)
    }

    /// `max(0, b_closed)`.
    pub fn backflow_closed(&self) -> f64 {
        self.b_closed.max(0.0)
    }
}

/// `n` nearly uniform unit vectors on the Fibonacci sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Rate of change of the trace distance between two evolved states,
/// `ṗₜ D(ρ₁(0), ρ₂(0))`.
pub fn distance_rate(
    channel: &ErgodicChannel,
    t: f64,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<f64> {
    let (_, pdot) = channel.schedule().eval(t)?;
    Ok(pdot * trace_distance(rho1, rho2)?)
}

/// BLP rate `max_{ρ₁, ρ₂} d/dt D(ρ₁(t), ρ₂(t))` over sampled initial pairs.
///
/// Qubits use `n_samples` antipodal pure pairs on a Fibonacci sphere; higher
/// dimensions use [`HAAR_PAIRS`] Haar-random pure pairs drawn from `seed`.
pub fn blp_rate(
    channel: &ErgodicChannel,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<BlpResult> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "blp needs at least 2 samples, got {n_samples}"
        )));
    }
    let (_, pdot) = channel.schedule().eval(t)?;
    let d = channel.dim();
    let mut best = f64::NEG_INFINITY;
    let mut pair = None;
    if d == 2 {
        for v in fibonacci_sphere(n_samples) {
            let b1 = BlochVector::new(v[0], v[1], v[2])?;
            let b2 = b1.neg();
            let rate = pdot
                * trace_distance(
                    &DensityMatrix::from_bloch(b1),
                    &DensityMatrix::from_bloch(b2),
                )?;
            if rate > best {
                best = rate;
                pair = Some((b1, b2));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..HAAR_PAIRS {
            let r1 = random_pure_state(&mut rng, d);
            let r2 = random_pure_state(&mut rng, d);
            best = best.max(pdot * trace_distance(&r1, &r2)?);
        }
    }
    Ok(BlpResult {
        t,
        b_numeric: best,
        b_closed: pdot,
        maximizing_pair: pair,
    })
}

/// Maximal intervals in `[0, t_max]` on which `ṗₜ > 0`.
///
/// Sign changes are located on a [`WINDOW_GRID`]-point grid and refined by
/// bisection. Values of `ṗ` within `1e−12` of the grid maximum of `|ṗ|` are
/// treated as zero.
pub fn backflow_windows(schedule: &ProbabilitySchedule, t_max: f64) -> Result<Vec<(f64, f64)>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let n = WINDOW_GRID;
    let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
    let pdots = times
        .iter()
        .map(|&t| schedule.eval(t).map(|(_, pd)| pd))
        .collect::<Result<Vec<f64>>>()?;
    let scale = pdots.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let tol = 1e-12 * scale;
    let positive = |t: f64| schedule.eval(t).map(|(_, pd)| pd > tol).unwrap_or(false);
    let refine = |mut lo: f64, mut hi: f64| {
        // positive(lo) != positive(hi)
        let lo_state = positive(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if positive(mid) == lo_state {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut windows = Vec::new();
    let mut start = if pdots[0] > tol { Some(0.0) } else { None };
    for k in 1..n {
        let (was, is) = (pdots[k - 1] > tol, pdots[k] > tol);
        if !was && is {
            start = Some(refine(times[k - 1], times[k]));
        } else if was && !is {
            if let Some(s) = start.take() {
                windows.push((s, refine(times[k - 1], times[k])));
            }
        }
    }
    if let Some(s) = start {
        windows.push((s, t_max));
    }
    Ok(windows)
}

/// Trapezoid rule on a possibly non-uniform grid.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// `∫ max(0, ṗₜ) dt` over a grid, the time-integrated closed-form BLP
/// backflow.
pub fn integrated_blp(schedule: &ProbabilitySchedule, times: &[f64]) -> Result<f64> {
    let values = times
        .iter()
        .map(|&t| schedule.eval(t).map(|(_, pd)| pd.max(0.0)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(times, &values))
}
