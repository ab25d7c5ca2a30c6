use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this value of `pₜ` the channel is treated as non-invertible.
pub const SINGULAR_P: f64 = 1e-9;

/// Time dependence of the survival probability `pₜ` with `p₀ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbabilitySchedule {
    /// `pₜ = e^{−γt}`.
    Exponential { gamma: f64 },
    /// `pₜ = cos²(ωt)`.
    CosineSquared { omega: f64 },
    /// `pₜ = e^{−γt} cos²(ωt)`.
    DampedCosine { gamma: f64, omega: f64 },
    /// `pₜ = 1`.
    Constant,
}

impl ProbabilitySchedule {
    pub fn exponential(gamma: f64) -> Result<Self> {
        check_rate("gamma", gamma)?;
        Ok(Self::Exponential { gamma })
    }

    pub fn cosine_squared(omega: f64) -> Result<Self> {
        check_rate("omega", omega)?;
        Ok(Self::CosineSquared { omega })
    }

    pub fn damped_cosine(gamma: f64, omega: f64) -> Result<Self> {
        check_rate("gamma", gamma)?;
        check_rate("omega", omega)?;
        Ok(Self::DampedCosine { gamma, omega })
    }

    /// `(pₜ, ṗₜ)`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        Ok(match *self {
            Self::Exponential { gamma } => {
                let p = (-gamma * t).exp();
                (p, -gamma * p)
            }
            Self::CosineSquared { omega } => {
                let c = (omega * t).cos();
                (c * c, -omega * (2.0 * omega * t).sin())
            }
            Self::DampedCosine { gamma, omega } => {
                let e = (-gamma * t).exp();
                let c = (omega * t).cos();
                let p = e * c * c;
                (p, -gamma * p - e * omega * (2.0 * omega * t).sin())
            }
            Self::Constant => (1.0, 0.0),
        })
    }

    pub fn p(&self, t: f64) -> Result<f64> {
        self.eval(t).map(|(p, _)| p)
    }

    /// `(pₜ, ṗₜ)`, failing when `pₜ ≤ SINGULAR_P`.
    pub fn eval_regular(&self, t: f64) -> Result<(f64, f64)> {
        let (p, pdot) = self.eval(t)?;
        if p <= SINGULAR_P {
            return Err(Error::SingularSchedule { t, p });
        }
        Ok((p, pdot))
    }

    /// Exact zeros of `pₜ` in the closed interval `[t0, t1]`.
    pub fn zeros_in(&self, t0: f64, t1: f64) -> Vec<f64> {
        let omega = match *self {
            Self::CosineSquared { omega } | Self::DampedCosine { omega, .. } => omega,
            _ => return Vec::new(),
        };
        if omega == 0.0 || t1 < t0 {
            return Vec::new();
        }
        // ωt = (2n + 1)π/2
        let first = ((2.0 * omega * t0 / PI - 1.0) / 2.0).ceil().max(0.0) as u64;
        (first..)
            .map(|n| (2 * n + 1) as f64 * PI / (2.0 * omega))
            .take_while(|&t| t <= t1)
            .filter(|&t| t >= t0)
            .collect()
    }

    /// Times in `[t0, t1]` where the map is singular: exact zeros of `pₜ`
    /// plus any listed `grid` points with `pₜ ≤ SINGULAR_P`.
    pub fn singular_times(&self, t0: f64, t1: f64, grid: &[f64]) -> Vec<f64> {
        let mut out = self.zeros_in(t0, t1);
        for &t in grid {
            if let Ok(p) = self.p(t) {
                if p <= SINGULAR_P && !out.iter().any(|&z| (z - t).abs() < 1e-9) {
                    out.push(t);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

fn check_rate(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and ≥ 0, got {v}"
        )))
    }
}
