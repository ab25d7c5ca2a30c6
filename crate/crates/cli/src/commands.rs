use std::path::{Path, PathBuf};

use ergochan::channels::{ErgodicChannel, FrameRotation, SINGULAR_P};
use ergochan::divisibility::divisibility_scan;
use ergochan::ergotropy::nm_measure;
use ergochan::lindblad::{integrate_ergodic, uniform_grid, ErgodicGenerator};
use ergochan::matkernel::DensityMatrix;
use ergochan::nonmarkov::{backflow_windows, blp_rate, integrated_blp, rhp_at};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{ensure_dir, num, write_csv, write_json};

pub const MEASURES_HEADER: [&str; 9] = [
    "t",
    "p",
    "pdot",
    "g_rhp_numeric",
    "g_rhp_closed",
    "blp_closed",
    "W_max",
    "sigma_W",
    "N_W_cumulative",
];

pub const DIVSCAN_HEADER: [&str; 6] = ["b", "p", "s1", "s2", "s3", "margin"];

/// Trace and Hermiticity tolerance for propagated states.
const STATE_TOL: f64 = 1e-10;

/// `t, p, re_i_j, im_i_j, …, closed_form_max_dev` for a `d`-level system.
pub fn evolve_header(d: usize) -> Vec<String> {
    let mut h = vec!["t".to_string(), "p".to_string()];
    for i in 0..d {
        for j in 0..d {
            h.push(format!("re_{i}_{j}"));
            h.push(format!("im_{i}_{j}"));
        }
    }
    h.push("closed_form_max_dev".into());
    h
}

fn strings(header: &[&str]) -> Vec<String> {
    header.iter().map(|s| s.to_string()).collect()
}

fn setup(config: &RunConfig) -> Result<(ErgodicChannel, FrameRotation, DensityMatrix), CliError> {
    let tau = config.fixed_point_state()?;
    let (channel, rotation) = ErgodicChannel::from_fixed_point(&tau, config.schedule()?)?;
    Ok((channel, rotation, tau))
}

fn time_grid(config: &RunConfig) -> Vec<f64> {
    uniform_grid(config.time.t0, config.time.t1, config.time.steps)
}

#[derive(Debug, Serialize)]
struct EvolveSummary {
    rows: usize,
    max_closed_form_dev: f64,
    final_closed_form_dev: f64,
}

/// Integrates the time-local master equation from `ρ₀` and writes
/// `evolve.csv` with the deviation from `pₜρ₀ + (1 − pₜ)τ` on each row.
pub fn evolve(config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let (channel, rotation, tau) = setup(config)?;
    let rho0 = config.initial_state_matrix()?;
    let grid = time_grid(config);
    let traj = integrate_ergodic(&channel, &rotation.to_frame(&rho0)?, &grid)?;
    let d = config.dimension;
    let mut rows = Vec::with_capacity(traj.len());
    let mut devs = Vec::with_capacity(traj.len());
    for (&t, state) in traj.times.iter().zip(&traj.states) {
        let lab = rotation.from_frame(state)?;
        let m = lab.matrix();
        if (m.trace().re - 1.0).abs() > STATE_TOL || m.hermiticity_defect() > STATE_TOL {
            return Err(CliError::Invariant(format!(
                "state at t = {t} lost trace or Hermiticity"
            )));
        }
        let p = channel.schedule().p(t)?;
        let closed = &rho0.matrix().scale_real(p) + &tau.matrix().scale_real(1.0 - p);
        let dev = m.max_abs_diff(&closed);
        let mut row = vec![num(t)?, num(p)?];
        for i in 0..d {
            for j in 0..d {
                row.push(num(m[(i, j)].re)?);
                row.push(num(m[(i, j)].im)?);
            }
        }
        row.push(num(dev)?);
        rows.push(row);
        devs.push(dev);
    }
    ensure_dir(out)?;
    let summary = EvolveSummary {
        rows: rows.len(),
        max_closed_form_dev: devs.iter().copied().fold(0.0, f64::max),
        final_closed_form_dev: devs.last().copied().unwrap_or(0.0),
    };
    Ok(vec![
        write_csv(&out.join("evolve.csv"), &evolve_header(d), &rows)?,
        write_json(&out.join("evolve_summary.json"), &summary)?,
    ])
}

#[derive(Debug, Serialize)]
struct MeasuresSummary {
    rows: usize,
    seed: u64,
    rhp_delta: f64,
    rhp_divergent_points: usize,
    rhp_max_closed_dev: f64,
    rhp_max_richardson_gap: f64,
    blp_max_sampling_gap: f64,
    integrated_blp: f64,
    backflow_windows: Vec<[f64; 2]>,
    ergotropy: String,
    #[serde(rename = "N_W")]
    n_w: Option<f64>,
    #[serde(rename = "script_N_W")]
    script_n_w: Option<f64>,
}

struct PointMeasures {
    p: f64,
    pdot: f64,
    g_numeric: f64,
    g_closed: f64,
    gap: f64,
    blp_closed: f64,
    blp_gap: f64,
}

/// Evaluates the RHP, BLP and ergotropic measures over the time grid and
/// writes `measures.csv` and `measures_summary.json`.
///
/// Ergotropy columns are filled only for qubits whose fixed point is
/// diagonal and passive; otherwise they are left empty.
pub fn measures(config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let (channel, rotation, _) = setup(config)?;
    let grid = time_grid(config);
    let schedule = *channel.schedule();
    let singular: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&t| schedule.p(t).is_ok_and(|p| p <= SINGULAR_P))
        .collect();
    if !singular.is_empty() {
        return Err(ergochan::Error::SingularGrid(singular).into());
    }
    let gen = ErgodicGenerator::for_channel(&channel)?;
    let points = grid
        .par_iter()
        .map(|&t| {
            let (p, pdot) = schedule.eval(t)?;
            let rhp = rhp_at(&gen, &channel, t, config.rhp_delta)?;
            let blp = blp_rate(&channel, t, config.blp_samples, config.seed)?;
            Ok(PointMeasures {
                p,
                pdot,
                g_numeric: rhp.g_numeric,
                g_closed: rhp.g_closed,
                gap: rhp.richardson_gap,
                blp_closed: blp.backflow_closed(),
                blp_gap: (blp.b_closed - blp.b_numeric).abs(),
            })
        })
        .collect::<Result<Vec<_>, ergochan::Error>>()?;

    let pops = channel.tau_populations();
    let passive = config.dimension == 2 && rotation.is_identity() && pops[0] >= pops[1];
    let (trace, ergotropy_status) = if passive {
        (
            Some(nm_measure(&channel, &config.hamiltonian()?, &grid)?),
            "computed".to_string(),
        )
    } else if config.dimension != 2 {
        (
            None,
            "skipped: ergotropic measure is defined for qubits only".to_string(),
        )
    } else {
        (
            None,
            "skipped: fixed point is not diagonal and passive".to_string(),
        )
    };

    let mut rows = Vec::with_capacity(grid.len());
    for (k, (&t, m)) in grid.iter().zip(&points).enumerate() {
        let mut row = vec![
            num(t)?,
            num(m.p)?,
            num(m.pdot)?,
            num(m.g_numeric)?,
            num(m.g_closed)?,
            num(m.blp_closed)?,
        ];
        match &trace {
            Some(tr) => {
                row.push(num(tr.w_max[k])?);
                row.push(num(tr.sigma_w[k])?);
                row.push(num(tr.n_w_cumulative[k])?);
            }
            None => row.extend(std::iter::repeat_n(String::new(), 3)),
        }
        rows.push(row);
    }

    let t_max = config.time.t1;
    let windows = backflow_windows(&schedule, t_max)?
        .into_iter()
        .filter(|&(_, b)| b > config.time.t0)
        .map(|(a, b)| [a.max(config.time.t0), b])
        .collect();
    let finite: Vec<&PointMeasures> = points.iter().filter(|m| m.g_numeric.is_finite()).collect();
    let summary = MeasuresSummary {
        rows: rows.len(),
        seed: config.seed,
        rhp_delta: config.rhp_delta,
        rhp_divergent_points: points.len() - finite.len(),
        rhp_max_closed_dev: finite
            .iter()
            .map(|m| (m.g_numeric - m.g_closed).abs())
            .fold(0.0, f64::max),
        rhp_max_richardson_gap: finite.iter().map(|m| m.gap).fold(0.0, f64::max),
        blp_max_sampling_gap: points.iter().map(|m| m.blp_gap).fold(0.0, f64::max),
        integrated_blp: integrated_blp(&schedule, &grid)?,
        backflow_windows: windows,
        ergotropy: ergotropy_status,
        n_w: trace.as_ref().map(|tr| tr.n_w()),
        script_n_w: trace.as_ref().map(|tr| tr.script_n_w),
    };
    if let Some(s) = summary.script_n_w {
        if !(0.0..1.0).contains(&s) {
            return Err(CliError::Invariant(format!(
                "normalized ergotropic measure {s} outside [0, 1)"
            )));
        }
    }
    ensure_dir(out)?;
    Ok(vec![
        write_csv(&out.join("measures.csv"), &strings(&MEASURES_HEADER), &rows)?,
        write_json(&out.join("measures_summary.json"), &summary)?,
    ])
}

#[derive(Debug, Serialize)]
struct DivscanSummary {
    grid_b: usize,
    grid_p: usize,
    rows: usize,
    min_margin: f64,
    argmin_b: f64,
    argmin_p: f64,
    max_eigen_deviation: f64,
    all_divisible: bool,
}

/// Scans the qubit ergodic family over `(|b|, p)` and writes `divscan.csv`
/// and `divscan_summary.json`.
pub fn divscan(config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let scan = divisibility_scan(config.scan.b, config.scan.p)?;
    let rows = scan
        .rows
        .iter()
        .map(|r| {
            Ok(vec![
                num(r.b)?,
                num(r.p)?,
                num(r.s[0])?,
                num(r.s[1])?,
                num(r.s[2])?,
                num(r.margin)?,
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let summary = DivscanSummary {
        grid_b: config.scan.b,
        grid_p: config.scan.p,
        rows: rows.len(),
        min_margin: scan.min_margin,
        argmin_b: scan.argmin.0,
        argmin_p: scan.argmin.1,
        max_eigen_deviation: scan.max_eigen_deviation,
        all_divisible: scan.all_divisible,
    };
    ensure_dir(out)?;
    Ok(vec![
        write_csv(&out.join("divscan.csv"), &strings(&DIVSCAN_HEADER), &rows)?,
        write_json(&out.join("divscan_summary.json"), &summary)?,
    ])
}
