use num_complex::Complex64;

use super::generator::ErgodicGenerator;
use super::superop::Superoperator;
use crate::channels::ErgodicChannel;
use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, DensityMatrix};

const UNIFORM_TOL: f64 = 1e-9;

/// States on a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

/// `n + 1` evenly spaced points from `t0` to `t1`.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let h = (t1 - t0) / n as f64;
    (0..=n)
        .map(|k| if k == n { t1 } else { t0 + k as f64 * h })
        .collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("time grid must be finite".into()));
    }
    if grid.len() < 2 {
        return Ok(());
    }
    let h = grid[1] - grid[0];
    if h <= 0.0 {
        return Err(Error::InvalidArgument(
            "time grid must be increasing".into(),
        ));
    }
    let scale = h
        .abs()
        .max(grid[0].abs().max(grid[grid.len() - 1].abs()) * f64::EPSILON);
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > UNIFORM_TOL * scale.max(1.0) {
            return Err(Error::InvalidArgument("time grid must be uniform".into()));
        }
    }
    Ok(())
}

fn axpy(x: &[Complex64], a: f64, k: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(k).map(|(x, k)| x + k * a).collect()
}

/// Classical RK4 for `ρ̇ = L(t)ρ` on a uniform grid.
///
/// The generator is evaluated at `t`, `t + h/2` and `t + h`; the last
/// evaluation is reused at the start of the next step. Every state is
/// re-projected onto the density-matrix manifold.
pub fn integrate<G>(mut generator: G, rho0: &DensityMatrix, grid: &[f64]) -> Result<Trajectory>
where
    G: FnMut(f64) -> Result<Superoperator>,
{
    check_grid(grid)?;
    let d = rho0.dim();
    let mut states = Vec::with_capacity(grid.len());
    states.push(rho0.clone());
    if grid.len() == 1 {
        return Ok(Trajectory {
            times: grid.to_vec(),
            states,
        });
    }
    let mut x = rho0.matrix().vectorize();
    let mut l0 = generator(grid[0])?;
    check_generator_dim(&l0, d)?;
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let lm = generator(t + 0.5 * h)?;
        let l1 = generator(w[1])?;
        let k1 = l0.apply_vec(&x);
        let k2 = lm.apply_vec(&axpy(&x, 0.5 * h, &k1));
        let k3 = lm.apply_vec(&axpy(&x, 0.5 * h, &k2));
        let k4 = l1.apply_vec(&axpy(&x, h, &k3));
        for i in 0..x.len() {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(w[1]));
        }
        let state = DensityMatrix::project(ComplexMatrix::unvectorize(&x, d)?)?;
        x = state.matrix().vectorize();
        states.push(state);
        l0 = l1;
    }
    Ok(Trajectory {
        times: grid.to_vec(),
        states,
    })
}

fn check_generator_dim(l: &Superoperator, d: usize) -> Result<()> {
    if l.dim() == d {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: d,
            found: l.dim(),
        })
    }
}

/// Integrates the general-dimension generator of an ergodic channel.
///
/// Fails with [`Error::SingularGrid`] when `pₜ` vanishes anywhere in the
/// closed grid interval, including the RK4 half steps.
pub fn integrate_ergodic(
    channel: &ErgodicChannel,
    rho0: &DensityMatrix,
    grid: &[f64],
) -> Result<Trajectory> {
    check_grid(grid)?;
    let (t0, t1) = (grid[0], grid[grid.len() - 1]);
    let schedule = *channel.schedule();
    let bad = schedule.singular_times(t0, t1, grid);
    if !bad.is_empty() {
        return Err(Error::SingularGrid(bad));
    }
    let gen = ErgodicGenerator::for_channel(channel)?;
    integrate(|t| gen.ddim_at(&schedule, t), rho0, grid)
}
