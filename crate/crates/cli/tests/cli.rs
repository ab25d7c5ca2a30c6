use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_ergochan");

const MEASURES_HEADER: &str =
    "t,p,pdot,g_rhp_numeric,g_rhp_closed,blp_closed,W_max,sigma_W,N_W_cumulative";
const DIVSCAN_HEADER: &str = "b,p,s1,s2,s3,margin";
const EVOLVE_HEADER_QUBIT: &str =
    "t,p,re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1,closed_form_max_dev";

fn qubit_config(schedule: &str, t1: f64, steps: usize) -> String {
    format!(
        r#"{{
  "dimension": 2,
  "fixed_point": {{"probabilities": [0.75, 0.25]}},
  "schedule": {schedule},
  "time": {{"t0": 0.0, "t1": {t1}, "steps": {steps}}}
}}"#
    )
}

fn exponential(t1: f64, steps: usize) -> String {
    qubit_config(r#"{"type": "exponential", "gamma": 1.0}"#, t1, steps)
}

fn cosine(t1: f64, steps: usize) -> String {
    qubit_config(r#"{"type": "cosine_squared", "omega": 1.0}"#, t1, steps)
}

struct Run {
    dir: TempDir,
    output: Output,
}

impl Run {
    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn code(&self) -> i32 {
        self.output.status.code().unwrap()
    }

    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.output.stderr).into_owned()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.out().join(name)).unwrap()
    }
}

fn run(cmd: &str, config: &str, extra: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, config).unwrap();
    let output = Command::new(BIN)
        .arg(cmd)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(extra)
        .output()
        .unwrap();
    Run { dir, output }
}

fn ok(cmd: &str, config: &str) -> Run {
    let r = run(cmd, config, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    r
}

/// Header and rows of a CSV file; empty cells become `None`.
fn table(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|c| {
                    if c.is_empty() {
                        None
                    } else {
                        Some(c.parse::<f64>().unwrap())
                    }
                })
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let k = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"));
    rows.iter().map(|r| r[k]).collect()
}

fn values(col: Vec<Option<f64>>) -> Vec<f64> {
    col.into_iter().map(Option::unwrap).collect()
}

fn first_line(text: &str) -> &str {
    text.lines().next().unwrap()
}

fn no_nan(dir: &Path) {
    for entry in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(!text.to_lowercase().contains("nan"));
    }
}

#[test]
fn golden_headers() {
    let r = ok("evolve", &exponential(1.0, 10));
    assert_eq!(first_line(&r.read("evolve.csv")), EVOLVE_HEADER_QUBIT);
    let r = ok("measures", &exponential(1.0, 10));
    assert_eq!(first_line(&r.read("measures.csv")), MEASURES_HEADER);
    let r = ok(
        "divscan",
        &exponential(1.0, 10).replacen('{', "{\n  \"scan\": {\"b\": 3, \"p\": 3},", 1),
    );
    assert_eq!(first_line(&r.read("divscan.csv")), DIVSCAN_HEADER);
}

#[test]
fn evolve_exponential_matches_closed_form() {
    let r = ok("evolve", &exponential(5.0, 100));
    let (h, rows) = table(&r.read("evolve.csv"));
    assert_eq!(rows.len(), 101);
    let t = values(column(&h, &rows, "t"));
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    let last = rows.last().unwrap();
    let p = (-5.0f64).exp();
    // ρ₀ has Bloch vector (0.5, 0, 0.5); τ = diag(0.75, 0.25).
    let want = [
        p * 0.75 + (1.0 - p) * 0.75,
        0.0,
        p * 0.25,
        0.0,
        p * 0.25,
        0.0,
        p * 0.25 + (1.0 - p) * 0.25,
        0.0,
    ];
    for (k, w) in want.iter().enumerate() {
        assert!((last[k + 2].unwrap() - w).abs() < 1e-6, "entry {k}");
    }
    assert!(last[10].unwrap() < 1e-6);
    assert!((last[1].unwrap() - p).abs() < 1e-15);
}

#[test]
fn evolve_tiny_interval_is_nearly_constant() {
    let r = ok("evolve", &exponential(1e-9, 4));
    let (_, rows) = table(&r.read("evolve.csv"));
    let (first, last) = (&rows[0], rows.last().unwrap());
    for k in 2..10 {
        assert!((first[k].unwrap() - last[k].unwrap()).abs() < 1e-8);
    }
}

#[test]
fn evolve_cosine_crossing_zero_is_singular() {
    let r = run("evolve", &cosine(3.0, 100), &[]);
    assert_eq!(r.code(), 3);
    let err = r.stderr();
    let zero = PI / 2.0;
    assert!(err.contains(&zero.to_string()), "{err}");
    assert!(!r.out().join("evolve.csv").exists());
}

#[test]
fn evolve_rotated_fixed_point() {
    let config = r#"{
  "dimension": 2,
  "fixed_point": {"bloch": [0.3, 0.2, 0.4]},
  "schedule": {"type": "damped_cosine", "gamma": 0.5, "omega": 1.0},
  "time": {"t1": 1.2, "steps": 200},
  "initial_state": {"bloch": [0.0, -0.6, 0.7]}
}"#;
    let r = ok("evolve", config);
    let (h, rows) = table(&r.read("evolve.csv"));
    let dev = values(column(&h, &rows, "closed_form_max_dev"));
    assert!(
        dev.iter().all(|&d| d < 1e-8),
        "{:?}",
        dev.iter().fold(0.0f64, |a, &b| a.max(b))
    );
}

#[test]
fn evolve_qutrit() {
    let config = r#"{
  "dimension": 3,
  "fixed_point": {"probabilities": [0.5, 0.3, 0.2]},
  "schedule": {"type": "exponential", "gamma": 0.7},
  "time": {"t1": 2.0, "steps": 100}
}"#;
    let r = ok("evolve", config);
    let (h, rows) = table(&r.read("evolve.csv"));
    assert_eq!(h.len(), 2 + 18 + 1);
    assert!(rows.last().unwrap()[20].unwrap() < 1e-8);
}

#[test]
fn measures_exponential_is_markovian() {
    let r = ok("measures", &exponential(5.0, 200));
    let (h, rows) = table(&r.read("measures.csv"));
    for name in ["g_rhp_closed", "blp_closed", "sigma_W", "N_W_cumulative"] {
        assert!(
            values(column(&h, &rows, name)).iter().all(|&v| v == 0.0),
            "{name}"
        );
    }
    let g = values(column(&h, &rows, "g_rhp_numeric"));
    assert!(g.iter().all(|&v| v.abs() < 1e-6));
    let w = values(column(&h, &rows, "W_max"));
    assert!(w.windows(2).all(|x| x[1] <= x[0] + 1e-12));
    let summary: serde_json::Value =
        serde_json::from_str(&r.read("measures_summary.json")).unwrap();
    assert_eq!(summary["script_N_W"], 0.0);
    assert_eq!(summary["backflow_windows"].as_array().unwrap().len(), 0);
    no_nan(&r.out());
}

#[test]
fn measures_cosine_nonzero_exactly_on_windows() {
    // Grid points 7k/2000 are rational, so none is a zero of cos².
    let r = ok("measures", &cosine(7.0, 2000));
    let (h, rows) = table(&r.read("measures.csv"));
    let t = values(column(&h, &rows, "t"));
    let cols: Vec<Vec<f64>> = ["g_rhp_closed", "blp_closed", "sigma_W"]
        .iter()
        .map(|n| values(column(&h, &rows, n)))
        .collect();
    let margin = 1e-3;
    for (k, &tk) in t.iter().enumerate() {
        let phase = tk.rem_euclid(PI);
        let inside = phase > PI / 2.0 + margin && phase < PI - margin;
        let outside = phase > margin && phase < PI / 2.0 - margin;
        for c in &cols {
            if inside {
                assert!(c[k] > 0.0, "t = {tk}");
            } else if outside {
                assert_eq!(c[k], 0.0, "t = {tk}");
            }
        }
    }
    let n_w = values(column(&h, &rows, "N_W_cumulative"));
    assert!(n_w.windows(2).all(|x| x[1] >= x[0]));
    let w = values(column(&h, &rows, "W_max"));
    assert!(w.windows(2).any(|x| x[1] > x[0]) && w.windows(2).any(|x| x[1] < x[0]));
    let summary: serde_json::Value =
        serde_json::from_str(&r.read("measures_summary.json")).unwrap();
    let script = summary["script_N_W"].as_f64().unwrap();
    assert!(script > 0.0 && script < 1.0);
    let windows = summary["backflow_windows"].as_array().unwrap();
    assert_eq!(windows.len(), 2);
    for (n, w) in windows.iter().enumerate() {
        let (a, b) = (w[0].as_f64().unwrap(), w[1].as_f64().unwrap());
        assert!((a - (2 * n + 1) as f64 * PI / 2.0).abs() < 1e-9);
        assert!((b - ((n + 1) as f64 * PI).min(7.0)).abs() < 1e-9);
    }
    no_nan(&r.out());
}

#[test]
fn measures_grid_point_on_zero_is_singular() {
    let r = run("measures", &cosine(PI, 2), &[]);
    assert_eq!(r.code(), 3, "{}", r.stderr());
}

#[test]
fn measures_near_zero_marks_divergence_with_inf() {
    let t1 = PI / 2.0 - 1e-4;
    let r = ok("measures", &cosine(t1, 10));
    let text = r.read("measures.csv");
    let last = text.lines().last().unwrap();
    let cells: Vec<&str> = last.split(',').collect();
    assert_eq!(cells[3], "inf");
    assert_eq!(cells[4], "inf");
}

#[test]
fn measures_higher_dimension_leaves_ergotropy_empty() {
    let config = r#"{
  "dimension": 3,
  "fixed_point": {"probabilities": [0.5, 0.3, 0.2]},
  "schedule": {"type": "damped_cosine", "gamma": 0.1, "omega": 1.0},
  "time": {"t1": 1.4, "steps": 20},
  "blp_samples": 16
}"#;
    let r = ok("measures", config);
    let (h, rows) = table(&r.read("measures.csv"));
    for name in ["W_max", "sigma_W", "N_W_cumulative"] {
        assert!(column(&h, &rows, name).iter().all(Option::is_none));
    }
    let g = values(column(&h, &rows, "g_rhp_numeric"));
    let closed = values(column(&h, &rows, "g_rhp_closed"));
    for (a, b) in g.iter().zip(&closed) {
        assert!((a - b).abs() <= 1e-4f64.max(1e-3 * b));
    }
    let summary: serde_json::Value =
        serde_json::from_str(&r.read("measures_summary.json")).unwrap();
    assert!(summary["script_N_W"].is_null());
}

#[test]
fn divscan_small_grid_and_defaults() {
    let with_scan = |b: usize, p: usize| {
        exponential(1.0, 10).replacen(
            '{',
            &format!("{{\n  \"scan\": {{\"b\": {b}, \"p\": {p}}},"),
            1,
        )
    };
    let r = ok("divscan", &with_scan(2, 2));
    let (h, rows) = table(&r.read("divscan.csv"));
    assert_eq!(rows.len(), 4);
    let b = values(column(&h, &rows, "b"));
    let p = values(column(&h, &rows, "p"));
    assert_eq!(b, vec![0.0, 0.0, 1.0, 1.0]);
    assert_eq!(p, vec![0.5, 1.0, 0.5, 1.0]);

    let r = ok("divscan", &exponential(1.0, 10));
    let (h, rows) = table(&r.read("divscan.csv"));
    assert_eq!(rows.len(), 101 * 101);
    let margin = values(column(&h, &rows, "margin"));
    assert!(margin.iter().all(|&m| m >= -1e-12));
    let summary: serde_json::Value = serde_json::from_str(&r.read("divscan_summary.json")).unwrap();
    assert!(summary["min_margin"].as_f64().unwrap() >= -1e-12);
    assert_eq!(summary["all_divisible"], true);
}

#[test]
fn outputs_are_deterministic() {
    let qutrit = r#"{
  "dimension": 3,
  "fixed_point": {"probabilities": [0.2, 0.3, 0.5]},
  "schedule": {"type": "cosine_squared", "omega": 1.0},
  "time": {"t1": 1.0, "steps": 8},
  "blp_samples": 8
}"#;
    for (cmd, config) in [
        ("evolve", exponential(2.0, 50)),
        ("measures", cosine(4.0, 300)),
        ("measures", qutrit.to_string()),
        ("divscan", exponential(1.0, 10)),
    ] {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("config.json");
        fs::write(&path, &config).unwrap();
        let out = dir.path().join("out");
        let once = || {
            let status = Command::new(BIN)
                .args([cmd, "--config"])
                .arg(&path)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap()
                .status;
            assert!(status.success());
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            files
        };
        let first = once();
        assert!(first.len() >= 3);
        assert_eq!(first, once(), "{cmd}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let config = cosine(4.0, 300);
    let mut outputs = Vec::new();
    for threads in ["1", "3", "0"] {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("config.json");
        fs::write(&path, &config).unwrap();
        let status = Command::new(BIN)
            .env("ERGOCHAN_THREADS", threads)
            .args(["measures", "--config"])
            .arg(&path)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        outputs.push(fs::read_to_string(dir.path().join("measures.csv")).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bad_thread_variable_is_config_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, exponential(1.0, 10)).unwrap();
    let status = Command::new(BIN)
        .env("ERGOCHAN_THREADS", "many")
        .args(["evolve", "--config"])
        .arg(&path)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_code_2() {
    let bad_sum = exponential(1.0, 10).replace("[0.75, 0.25]", "[0.6, 0.5]");
    let r = run("evolve", &bad_sum, &[]);
    assert_eq!(r.code(), 2);
    assert!(r.stderr().contains("fixed_point.probabilities"));

    let r = run("evolve", "{\"dimension\": 2", &[]);
    assert_eq!(r.code(), 2);

    let status = Command::new(BIN)
        .args(["divscan", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn canonical_config_is_written_and_seed_overrides() {
    let r = run("measures", &exponential(1.0, 10), &["--seed", "7"]);
    assert_eq!(r.code(), 0);
    let canonical = r.read("config.json");
    let parsed: serde_json::Value = serde_json::from_str(&canonical).unwrap();
    assert_eq!(parsed["seed"], 7);
    assert_eq!(parsed["rhp_delta"], 1e-6);
    assert_eq!(parsed["blp_samples"], 512);
    let again = ergochan_cli::parse_config_str(&canonical).unwrap();
    assert_eq!(again.to_canonical_json(), canonical);
}

/// Shape checks the plotting scripts rely on: the divscan CSV is a
/// rectangular `(b, p)` grid with a `margin` column, and the measures CSV has
/// `t` plus value columns with a nonempty body.
#[test]
fn plot_input_contracts() {
    let r = ok(
        "divscan",
        &exponential(1.0, 10).replacen('{', "{\n  \"scan\": {\"b\": 7, \"p\": 5},", 1),
    );
    let (h, rows) = table(&r.read("divscan.csv"));
    for name in ["b", "p", "margin"] {
        assert!(h.iter().any(|c| c == name));
    }
    let b = values(column(&h, &rows, "b"));
    let p = values(column(&h, &rows, "p"));
    let mut bs = b.clone();
    bs.dedup();
    let ps: Vec<f64> = p[..5].to_vec();
    assert_eq!(bs.len(), 7);
    assert_eq!(rows.len(), bs.len() * ps.len());
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[0].unwrap(), bs[k / 5]);
        assert_eq!(row[1].unwrap(), ps[k % 5]);
        assert!(row.iter().all(Option::is_some));
    }

    for config in [exponential(6.0, 300), cosine(6.0, 300)] {
        let r = ok("measures", &config);
        let (h, rows) = table(&r.read("measures.csv"));
        assert_eq!(h[0], "t");
        assert!(h.iter().any(|c| c == "W_max") && h.iter().any(|c| c == "sigma_W"));
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.len() == h.len()));
    }
}
