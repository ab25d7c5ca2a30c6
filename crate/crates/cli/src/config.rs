use std::path::Path;

use ergochan::channels::ProbabilitySchedule;
use ergochan::ergotropy::Hamiltonian;
use ergochan::matkernel::{BlochVector, DensityMatrix};
use ergochan::nonmarkov::{DEFAULT_BLP_SAMPLES, DEFAULT_DELTA, MAX_DELTA};
use ergochan::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_OUTPUT_DIR: &str = "out";
pub const DEFAULT_SCAN_POINTS: usize = 101;

const SUM_TOL: f64 = 1e-9;

/// Fixed point `τ`: diagonal populations or, for qubits, a Bloch vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FixedPoint {
    Probabilities(Vec<f64>),
    Bloch([f64; 3]),
}

/// Initial state `ρ₀` for `evolve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Probabilities(Vec<f64>),
    Bloch([f64; 3]),
    /// Pure state amplitudes as `[re, im]` pairs; normalized on load.
    Amplitudes(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Exponential { gamma: f64 },
    CosineSquared { omega: f64 },
    DampedCosine { gamma: f64, omega: f64 },
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_scan")]
    pub b: usize,
    #[serde(default = "default_scan")]
    pub p: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            b: DEFAULT_SCAN_POINTS,
            p: DEFAULT_SCAN_POINTS,
        }
    }
}

fn default_scan() -> usize {
    DEFAULT_SCAN_POINTS
}

/// Configuration as written by the user; optional fields may be absent.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimension: usize,
    fixed_point: FixedPoint,
    hamiltonian: Option<Vec<f64>>,
    schedule: ScheduleConfig,
    time: TimeConfig,
    initial_state: Option<InitialState>,
    rhp_delta: Option<f64>,
    blp_samples: Option<usize>,
    seed: Option<u64>,
    output_dir: Option<String>,
    scan: Option<ScanConfig>,
}

/// A validated run configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub fixed_point: FixedPoint,
    pub hamiltonian: Vec<f64>,
    pub schedule: ScheduleConfig,
    pub time: TimeConfig,
    pub initial_state: InitialState,
    pub rhp_delta: f64,
    pub blp_samples: usize,
    pub seed: u64,
    pub output_dir: String,
    pub scan: ScanConfig,
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn check_probabilities(field: &str, probs: &[f64], d: usize) -> Result<(), CliError> {
    if probs.len() != d {
        return Err(invalid(
            field,
            format!("expected {d} entries, found {}", probs.len()),
        ));
    }
    if let Some(v) = probs.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(invalid(
            field,
            format!("entries must be nonnegative, found {v}"),
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(invalid(field, format!("entries sum to {sum}, expected 1")));
    }
    Ok(())
}

fn check_bloch(field: &str, v: &[f64; 3], d: usize) -> Result<(), CliError> {
    if d != 2 {
        return Err(invalid(
            field,
            format!("a Bloch vector requires dimension 2, found {d}"),
        ));
    }
    BlochVector::new(v[0], v[1], v[2]).map_err(|e| invalid(field, e))?;
    Ok(())
}

fn check_rate(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and ≥ 0, found {v}")))
    }
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, CliError> {
        let d = self.dimension;
        if d < 2 {
            return Err(invalid(
                "dimension",
                format!("must be at least 2, found {d}"),
            ));
        }
        match &self.fixed_point {
            FixedPoint::Probabilities(p) => check_probabilities("fixed_point.probabilities", p, d)?,
            FixedPoint::Bloch(v) => check_bloch("fixed_point.bloch", v, d)?,
        }
        let hamiltonian = self
            .hamiltonian
            .unwrap_or_else(|| (0..d).map(|k| k as f64).collect());
        if hamiltonian.len() != d {
            return Err(invalid(
                "hamiltonian",
                format!("expected {d} energies, found {}", hamiltonian.len()),
            ));
        }
        Hamiltonian::new(hamiltonian.clone()).map_err(|e| invalid("hamiltonian", e))?;
        match self.schedule {
            ScheduleConfig::Exponential { gamma } => check_rate("schedule.gamma", gamma)?,
            ScheduleConfig::CosineSquared { omega } => check_rate("schedule.omega", omega)?,
            ScheduleConfig::DampedCosine { gamma, omega } => {
                check_rate("schedule.gamma", gamma)?;
                check_rate("schedule.omega", omega)?;
            }
            ScheduleConfig::Constant => {}
        }
        let time = self.time;
        if !(time.t0.is_finite() && time.t0 >= 0.0) {
            return Err(invalid(
                "time.t0",
                format!("must be finite and ≥ 0, found {}", time.t0),
            ));
        }
        if !(time.t1.is_finite() && time.t1 > time.t0) {
            return Err(invalid(
                "time.t1",
                format!("must exceed t0 = {}, found {}", time.t0, time.t1),
            ));
        }
        if time.steps < 2 {
            return Err(invalid(
                "time.steps",
                format!("must be at least 2, found {}", time.steps),
            ));
        }
        let initial_state = self
            .initial_state
            .unwrap_or_else(|| default_initial_state(d));
        match &initial_state {
            InitialState::Probabilities(p) => {
                check_probabilities("initial_state.probabilities", p, d)?
            }
            InitialState::Bloch(v) => check_bloch("initial_state.bloch", v, d)?,
            InitialState::Amplitudes(a) => {
                if a.len() != d {
                    return Err(invalid(
                        "initial_state.amplitudes",
                        format!("expected {d} amplitudes, found {}", a.len()),
                    ));
                }
                let norm: f64 = a.iter().map(|z| z[0] * z[0] + z[1] * z[1]).sum();
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(invalid(
                        "initial_state.amplitudes",
                        "must have nonzero finite norm",
                    ));
                }
            }
        }
        let rhp_delta = self.rhp_delta.unwrap_or(DEFAULT_DELTA);
        if !(rhp_delta > 0.0 && rhp_delta <= MAX_DELTA) {
            return Err(invalid(
                "rhp_delta",
                format!("must lie in (0, {MAX_DELTA}], found {rhp_delta}"),
            ));
        }
        let blp_samples = self.blp_samples.unwrap_or(DEFAULT_BLP_SAMPLES);
        if blp_samples < 2 {
            return Err(invalid(
                "blp_samples",
                format!("must be at least 2, found {blp_samples}"),
            ));
        }
        let scan = self.scan.unwrap_or_default();
        if scan.b < 2 || scan.p < 2 {
            return Err(invalid(
                "scan",
                format!("grids need at least 2 points, found {}×{}", scan.b, scan.p),
            ));
        }
        let output_dir = self
            .output_dir
            .unwrap_or_else(|| DEFAULT_OUTPUT_DIR.to_string());
        if output_dir.is_empty() {
            return Err(invalid("output_dir", "must not be empty"));
        }
        Ok(RunConfig {
            dimension: d,
            fixed_point: self.fixed_point,
            hamiltonian,
            schedule: self.schedule,
            time,
            initial_state,
            rhp_delta,
            blp_samples,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            output_dir,
            scan,
        })
    }
}

/// `(0.5, 0, 0.5)` for a qubit, the uniform superposition otherwise.
pub fn default_initial_state(d: usize) -> InitialState {
    if d == 2 {
        InitialState::Bloch([0.5, 0.0, 0.5])
    } else {
        let a = 1.0 / (d as f64).sqrt();
        InitialState::Amplitudes(vec![[a, 0.0]; d])
    }
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    raw.validate()
}

/// Reads, parses and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

impl RunConfig {
    /// Pretty-printed JSON with every field present; parsing it yields the
    /// same configuration.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn schedule(&self) -> Result<ProbabilitySchedule, CliError> {
        let s = match self.schedule {
            ScheduleConfig::Exponential { gamma } => ProbabilitySchedule::exponential(gamma),
            ScheduleConfig::CosineSquared { omega } => ProbabilitySchedule::cosine_squared(omega),
            ScheduleConfig::DampedCosine { gamma, omega } => {
                ProbabilitySchedule::damped_cosine(gamma, omega)
            }
            ScheduleConfig::Constant => Ok(ProbabilitySchedule::Constant),
        };
        s.map_err(|e| invalid("schedule", e))
    }

    pub fn fixed_point_state(&self) -> Result<DensityMatrix, CliError> {
        let state = match &self.fixed_point {
            FixedPoint::Probabilities(p) => DensityMatrix::diagonal(p),
            FixedPoint::Bloch(v) => {
                BlochVector::new(v[0], v[1], v[2]).map(DensityMatrix::from_bloch)
            }
        };
        state.map_err(|e| invalid("fixed_point", e))
    }

    pub fn initial_state_matrix(&self) -> Result<DensityMatrix, CliError> {
        let state = match &self.initial_state {
            InitialState::Probabilities(p) => DensityMatrix::diagonal(p),
            InitialState::Bloch(v) => {
                BlochVector::new(v[0], v[1], v[2]).map(DensityMatrix::from_bloch)
            }
            InitialState::Amplitudes(a) => {
                let amps: Vec<Complex64> = a.iter().map(|z| Complex64::new(z[0], z[1])).collect();
                DensityMatrix::pure(&amps)
            }
        };
        state.map_err(|e| invalid("initial_state", e))
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian, CliError> {
        Hamiltonian::new(self.hamiltonian.clone()).map_err(|e| invalid("hamiltonian", e))
    }
}
