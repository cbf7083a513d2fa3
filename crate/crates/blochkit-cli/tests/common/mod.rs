#![allow(dead_code)]

use blochkit_cli::config::{parse_config, Mode, RunConfig};
use blochkit_cli::run;
use std::path::{Path, PathBuf};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn load_config(name: &str) -> RunConfig {
    let path = repo_root().join("configs").join(format!("{name}.cfg"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_config(&text).unwrap()
}

/// Run a shipped config (optionally in another mode) into `dir`, returning the main CSV.
pub fn run_config(name: &str, mode: Option<Mode>, dir: &Path) -> PathBuf {
    let mut cfg = load_config(name);
    if let Some(m) = mode {
        cfg.mode = m;
    }
    cfg.output.dir = dir.to_path_buf();
    cfg.output.svg = false;
    cfg.workers = 2;
    run(&cfg).unwrap().tables[0].clone()
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn read(path: &Path) -> Self {
        let mut r = csv::Reader::from_path(path).unwrap();
        let header = r.headers().unwrap().iter().map(str::to_string).collect();
        let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
        Self { header, rows }
    }

    pub fn col(&self, name: &str) -> Vec<f64> {
        let k = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }
}

pub fn golden(name: &str) -> Csv {
    Csv::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
}

/// Strict local maxima of a sampled curve (three-point stencil).
pub fn stencil_peaks(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 1e-12).collect()
}

/// Maximal runs where `v > thr`, as (first, last) sample indices.
pub fn runs_above(v: &[f64], thr: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, x) in v.iter().enumerate() {
        match (start, *x > thr) {
            (None, true) => start = Some(i),
            (Some(s), false) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, v.len() - 1));
    }
    out
}

/// Sweep-figure check: same number of |Im κ| peaks as the reference, each
/// within one grid step. Returns a description of the first mismatch.
pub fn check_sweep_peaks(fig: &str, dir: &Path) -> Result<String, String> {
    let csv = Csv::read(&run_config(fig, None, dir));
    let w = csv.col("omega");
    let im = csv.col("abs_im");
    let step = w[1] - w[0];
    let got = stencil_peaks(&im);
    let want = golden(&format!("{fig}_peaks.csv")).col("peak_omega");
    if got.len() != want.len() {
        return Err(format!("{fig}: {} peaks, reference has {}", got.len(), want.len()));
    }
    let mut worst = 0.0f64;
    for (i, r) in got.iter().zip(&want) {
        let d = (w[*i] - r).abs();
        worst = worst.max(d);
        if d > step {
            return Err(format!("{fig}: peak at {} vs reference {r}", w[*i]));
        }
    }
    Ok(format!("{fig}: {} peaks, max offset {worst:.2e} (step {step:.3e})", got.len()))
}

/// Constant-ε figure: evanescent runs of the sweep match the reference gap
/// edges to one grid step, and the gaps mode matches them to 1e-9.
pub fn check_fig4(dir: &Path) -> Result<String, String> {
    let csv = Csv::read(&run_config("fig4", None, dir));
    let w = csv.col("omega");
    let im = csv.col("abs_im");
    let step = w[1] - w[0];
    let want = golden("fig4_edges.csv");
    let (lo, hi) = (want.col("lo"), want.col("hi"));
    let runs = runs_above(&im, 1e-8);
    if runs.len() != lo.len() {
        return Err(format!("fig4: {} gaps in sweep, reference has {}", runs.len(), lo.len()));
    }
    for ((a, b), (l, h)) in runs.iter().zip(lo.iter().zip(&hi)) {
        if (w[*a] - l).abs() > step || (w[*b] - h).abs() > step {
            return Err(format!("fig4: sweep gap [{}, {}] vs [{l}, {h}]", w[*a], w[*b]));
        }
    }
    let gaps = Csv::read(&run_config("fig4", Some(Mode::Gaps), dir));
    let (glo, ghi) = (gaps.col("lo"), gaps.col("hi"));
    if glo.len() != lo.len() {
        return Err(format!("fig4: gaps mode found {} gaps, reference has {}", glo.len(), lo.len()));
    }
    let mut worst = 0.0f64;
    for i in 0..lo.len() {
        worst = worst.max((glo[i] - lo[i]).abs()).max((ghi[i] - hi[i]).abs());
    }
    if worst > 1e-9 {
        return Err(format!("fig4: gap edges off by {worst:e}"));
    }
    Ok(format!("fig4: {} gaps, edges within {worst:.1e}", lo.len()))
}

/// Cascade figure: ten gaps matching the reference edges to 1e-9 and a
/// growing envelope.
pub fn check_cascade(dir: &Path) -> Result<String, String> {
    let csv = Csv::read(&run_config("fig_cascade", None, dir));
    let want = golden("fig_cascade_gaps.csv");
    let (lo, hi) = (csv.col("lo"), csv.col("hi"));
    let (rlo, rhi) = (want.col("lo"), want.col("hi"));
    if lo.len() != rlo.len() {
        return Err(format!("fig_cascade: {} gaps, reference has {}", lo.len(), rlo.len()));
    }
    let mut worst = 0.0f64;
    for i in 0..lo.len() {
        worst = worst.max((lo[i] - rlo[i]).abs()).max((hi[i] - rhi[i]).abs());
    }
    if worst > 1e-9 {
        return Err(format!("fig_cascade: edges off by {worst:e}"));
    }
    let env = Csv::read(&dir.join("fig_cascade_envelope.csv")).col("max_im_kappa");
    if !env.windows(2).all(|p| p[1] > p[0]) {
        return Err(format!("fig_cascade: envelope not increasing {env:?}"));
    }
    Ok(format!("fig_cascade: {} gaps, edges within {worst:.1e}", lo.len()))
}
