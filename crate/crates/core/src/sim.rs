//! Simulation scenarios, accuracy metrics and the study runner.
//!
//! A scenario draws `n × k` independent normal columns: the first `h` have
//! variance 15, the remaining `k − h` variance 1. Each algorithm embeds the
//! rows in `h` dimensions; the embedding is aligned to the dominant columns
//! by Procrustes and scored by per-column Pearson correlation, and its
//! eigenvalue estimates are compared with 15.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, AlgorithmParams};
use crate::classical::MdsConfiguration;
use crate::error::{MdsError, Result};
use crate::matrix::DataMatrix;
use crate::procrustes::{apply_procrustes, fit_procrustes};
use crate::rng::{derive_seed, stream_rng, NormalSampler};

pub const DOMINANT_VARIANCE: f64 = 15.0;

/// Column header shared by the summary and per-dimension study files.
pub const STUDY_HEADER: [&str; 11] = [
    "algorithm",
    "n",
    "k",
    "h",
    "replication",
    "dim",
    "correlation",
    "eigen_estimate",
    "bias_contrib",
    "elapsed_s",
    "error",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub n: usize,
    pub k: usize,
    pub h: usize,
    pub dominant_sd: f64,
    pub noise_sd: f64,
    pub replications: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(n: usize, k: usize, h: usize, replications: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            h,
            dominant_sd: DOMINANT_VARIANCE.sqrt(),
            noise_sd: 1.0,
            replications,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h == 0 || self.h > self.k {
            return Err(MdsError::Param(format!("need 1 ≤ h ≤ k, got h = {}, k = {}", self.h, self.k)));
        }
        if self.n < 10 {
            return Err(MdsError::Param(format!("need n ≥ 10, got {}", self.n)));
        }
        if !(self.dominant_sd > 0.0 && self.noise_sd > 0.0) {
            return Err(MdsError::Param("standard deviations must be positive".into()));
        }
        Ok(())
    }
}

/// Draw replication `replication` of `spec`. Each replication uses its own
/// ChaCha stream of `spec.seed`; values are filled row by row.
pub fn generate_scenario(spec: &ScenarioSpec, replication: usize) -> Result<DataMatrix> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, replication as u64);
    let mut normal = NormalSampler::new();
    DataMatrix::from_fn(spec.n, spec.k, |_, j| {
        let sd = if j < spec.h { spec.dominant_sd } else { spec.noise_sd };
        sd * normal.sample(&mut rng)
    })
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Align `points` to `dominant` by Procrustes, then return the Pearson
/// correlation of each aligned column with the matching dominant column.
pub fn aligned_correlations(points: &Mat<f64>, dominant: &Mat<f64>) -> Result<Vec<f64>> {
    if points.ncols() != dominant.ncols() || points.nrows() != dominant.nrows() {
        return Err(MdsError::Shape(format!(
            "configuration is {}×{} but the dominant block is {}×{}",
            points.nrows(),
            points.ncols(),
            dominant.nrows(),
            dominant.ncols()
        )));
    }
    let fit = fit_procrustes(dominant, points)?;
    let aligned = apply_procrustes(points, &fit)?;
    (0..dominant.ncols())
        .map(|j| {
            let a: Vec<f64> = aligned.col(j).iter().copied().collect();
            let d: Vec<f64> = dominant.col(j).iter().copied().collect();
            pearson(&a, &d).ok_or_else(|| {
                MdsError::Metric(format!("column {} has zero variance", j + 1))
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenErrorStats {
    pub bias: Vec<f64>,
    pub mse: Vec<f64>,
}

/// Per-dimension bias and MSE of eigenvalue estimates against `true_value`.
/// `estimates[rep][dim]`.
pub fn eigenvalue_error_stats(estimates: &[Vec<f64>], true_value: f64) -> Result<EigenErrorStats> {
    let Some(first) = estimates.first() else {
        return Err(MdsError::Param("need at least one replication".into()));
    };
    let dims = first.len();
    if estimates.iter().any(|e| e.len() != dims) {
        return Err(MdsError::Shape("replications report different dimensions".into()));
    }
    let reps = estimates.len() as f64;
    let mut bias = vec![0.0; dims];
    let mut mse = vec![0.0; dims];
    for e in estimates {
        for (i, &v) in e.iter().enumerate() {
            bias[i] += (v - true_value) / reps;
            mse[i] += (v - true_value).powi(2) / reps;
        }
    }
    Ok(EigenErrorStats { bias, mse })
}

/// Scores for one (scenario, algorithm) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMetrics {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub h: usize,
    /// `correlations[rep][dim]`, successful replications only.
    pub correlations: Vec<Vec<f64>>,
    pub eigen_estimates: Vec<Vec<f64>>,
    pub eigen_bias: Vec<f64>,
    pub eigen_mse: Vec<f64>,
    pub elapsed_s: Vec<f64>,
    pub failures: Vec<(usize, String)>,
}

impl ScenarioMetrics {
    pub fn mean_correlation(&self) -> f64 {
        let all: Vec<f64> = self.correlations.iter().flatten().copied().collect();
        all.iter().sum::<f64>() / all.len() as f64
    }
}

/// A grid of scenarios crossed with algorithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub seed: u64,
    pub sample_sizes: Vec<usize>,
    pub dims: Vec<usize>,
    pub dominant: Vec<usize>,
    pub replications: usize,
    pub algorithms: Vec<Algorithm>,
    /// Partition size override; each algorithm's default otherwise.
    #[serde(default)]
    pub l: Option<usize>,
    /// Connecting/sampling point override; `2h` otherwise.
    #[serde(default)]
    pub c: Option<usize>,
    /// Write `elapsed_s`; with timing off the output files are a pure
    /// function of the config.
    #[serde(default = "yes")]
    pub timing: bool,
}

fn yes() -> bool {
    true
}

impl StudyConfig {
    /// Small grid that runs in a few minutes.
    pub fn quick() -> Self {
        Self {
            seed: 2024,
            sample_sizes: vec![5_000, 10_000],
            dims: vec![10],
            dominant: vec![1, 5],
            replications: 3,
            algorithms: Algorithm::SCALABLE.to_vec(),
            l: None,
            c: None,
            timing: true,
        }
    }

    /// Full-scale grid: five sample sizes up to 10⁶, k ∈ {10, 100}, h = 1..10
    /// and 100 replications per scenario.
    pub fn full_scale() -> Self {
        Self {
            seed: 2024,
            sample_sizes: vec![5_000, 10_000, 20_000, 100_000, 1_000_000],
            dims: vec![10, 100],
            dominant: (1..=10).collect(),
            replications: 100,
            algorithms: Algorithm::SCALABLE.to_vec(),
            l: None,
            c: None,
            timing: true,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| MdsError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| MdsError::format(path, e.to_string()))
    }

    /// Valid scenarios in grid order (n, then k, then h); `h > k` is skipped.
    pub fn scenarios(&self) -> Vec<ScenarioSpec> {
        let mut out = Vec::new();
        for &n in &self.sample_sizes {
            for &k in &self.dims {
                for &h in &self.dominant {
                    if h <= k {
                        let seed = derive_seed(self.seed, &[n as u64, k as u64, h as u64]);
                        out.push(ScenarioSpec::new(n, k, h, self.replications, seed));
                    }
                }
            }
        }
        out
    }

    pub fn params_for(&self, algorithm: Algorithm, spec: &ScenarioSpec, replication: usize) -> AlgorithmParams {
        let seed = derive_seed(spec.seed, &[algorithm as u64, replication as u64]);
        let mut params = algorithm.default_params(spec.h, seed);
        if let Some(l) = self.l {
            params.l = l;
        }
        if let Some(c) = self.c {
            params.c = c;
            params.s = c;
        }
        params
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(MdsError::Param("replications must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(MdsError::Param("no algorithms selected".into()));
        }
        let scenarios = self.scenarios();
        if scenarios.is_empty() {
            return Err(MdsError::Param("grid has no valid scenario".into()));
        }
        for spec in &scenarios {
            spec.validate()?;
            for &a in &self.algorithms {
                self.params_for(a, spec, 0).validate(a)?;
            }
        }
        Ok(())
    }
}

/// One replication's outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationResult {
    pub replication: usize,
    pub outcome: std::result::Result<ReplicationScores, String>,
    pub elapsed_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationScores {
    pub correlations: Vec<f64>,
    pub eigen_estimates: Vec<f64>,
}

/// Run `algorithm` on replication `replication` of `spec`.
pub fn run_replication(
    config: &StudyConfig,
    algorithm: Algorithm,
    spec: &ScenarioSpec,
    replication: usize,
) -> Result<ReplicationResult> {
    let data = generate_scenario(spec, replication)?;
    let params = config.params_for(algorithm, spec, replication);
    let start = Instant::now();
    let run = algorithm.run(&data, &params);
    let elapsed_s = start.elapsed().as_secs_f64();
    let outcome = run
        .and_then(|cfg: MdsConfiguration| {
            let dominant = data.leading_columns(spec.h)?.to_mat();
            let correlations = aligned_correlations(&cfg.points, &dominant)?;
            Ok(ReplicationScores {
                correlations,
                eigen_estimates: cfg.eigenvalue_estimates,
            })
        })
        .map_err(|e| e.to_string());
    Ok(ReplicationResult {
        replication,
        outcome,
        elapsed_s,
    })
}

fn cell_name(algorithm: Algorithm, spec: &ScenarioSpec) -> String {
    format!("{}_n{}_k{}_h{}", algorithm, spec.n, spec.k, spec.h)
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Summary and per-dimension rows for one cell.
fn cell_rows(
    config: &StudyConfig,
    algorithm: Algorithm,
    spec: &ScenarioSpec,
    results: &[ReplicationResult],
) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let mut summary = Vec::new();
    let mut detail = Vec::new();
    for res in results {
        let base = |dim: usize| {
            vec![
                algorithm.to_string(),
                spec.n.to_string(),
                spec.k.to_string(),
                spec.h.to_string(),
                res.replication.to_string(),
                dim.to_string(),
            ]
        };
        let elapsed = if config.timing {
            format!("{:.3}", res.elapsed_s)
        } else {
            String::new()
        };
        match &res.outcome {
            Ok(scores) => {
                let h = spec.h as f64;
                let mean_corr = scores.correlations.iter().sum::<f64>() / h;
                let mean_eig = scores.eigen_estimates.iter().sum::<f64>() / h;
                let mut row = base(spec.h);
                row.extend([
                    fmt_real(mean_corr),
                    fmt_real(mean_eig),
                    fmt_real(mean_eig - DOMINANT_VARIANCE),
                    elapsed.clone(),
                    String::new(),
                ]);
                summary.push(row);
                for (d, (&rho, &eig)) in scores.correlations.iter().zip(&scores.eigen_estimates).enumerate() {
                    let mut row = base(d + 1);
                    row.extend([
                        fmt_real(rho),
                        fmt_real(eig),
                        fmt_real(eig - DOMINANT_VARIANCE),
                        elapsed.clone(),
                        String::new(),
                    ]);
                    detail.push(row);
                }
            }
            Err(message) => {
                let mut row = base(spec.h);
                row.extend([String::new(), String::new(), String::new(), elapsed, message.clone()]);
                detail.push(row.clone());
                summary.push(row);
            }
        }
    }
    (summary, detail)
}

fn write_rows(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(STUDY_HEADER).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| MdsError::io(path, e))
}

fn read_rows(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().ne(STUDY_HEADER) {
        return Err(MdsError::format(path, "unexpected study header"));
    }
    r.records()
        .map(|rec| {
            rec.map(|rec| rec.iter().map(str::to_owned).collect())
                .map_err(|e| csv_error(path, e))
        })
        .collect()
}

fn csv_error(path: &Path, e: csv::Error) -> MdsError {
    MdsError::format(path, e.to_string())
}

/// Files written by [`run_study`].
#[derive(Clone, Debug)]
pub struct StudyOutput {
    pub summary_path: PathBuf,
    pub detail_path: PathBuf,
    pub metrics_path: PathBuf,
    pub metrics: Vec<ScenarioMetrics>,
    /// Cells read back from an earlier run instead of recomputed.
    pub resumed_cells: usize,
}

fn metrics_from_rows(algorithm: Algorithm, spec: &ScenarioSpec, detail: &[Vec<String>]) -> ScenarioMetrics {
    let mut correlations = Vec::new();
    let mut eigen_estimates = Vec::new();
    let mut elapsed_s = Vec::new();
    let mut failures = Vec::new();
    for rep in 0..spec.replications {
        let rows: Vec<&Vec<String>> = detail.iter().filter(|r| r[4] == rep.to_string()).collect();
        if let Some(t) = rows.first().and_then(|r| r[9].parse::<f64>().ok()) {
            elapsed_s.push(t);
        }
        if let Some(err) = rows.iter().find(|r| !r[10].is_empty()) {
            failures.push((rep, err[10].clone()));
            continue;
        }
        let parse = |col: usize| rows.iter().map(|r| r[col].parse::<f64>().unwrap_or(f64::NAN)).collect::<Vec<_>>();
        correlations.push(parse(6));
        eigen_estimates.push(parse(7));
    }
    let stats = eigenvalue_error_stats(&eigen_estimates, DOMINANT_VARIANCE).unwrap_or(EigenErrorStats {
        bias: Vec::new(),
        mse: Vec::new(),
    });
    ScenarioMetrics {
        algorithm,
        n: spec.n,
        k: spec.k,
        h: spec.h,
        correlations,
        eigen_estimates,
        eigen_bias: stats.bias,
        eigen_mse: stats.mse,
        elapsed_s,
        failures,
    }
}

/// Run every (scenario, algorithm) cell of `config` and write
/// `summary.csv` (one row per cell and replication, `dim = h`, metrics
/// averaged over the `h` dimensions), `detail.csv` (one row per dimension)
/// and `metrics.json` (bias and MSE per cell) into `out_dir`.
///
/// Each finished cell is also kept under `out_dir/cells/`; rerunning with
/// the same directory reuses complete cell files, so interrupted studies
/// resume where they stopped.
pub fn run_study(config: &StudyConfig, out_dir: &Path) -> Result<StudyOutput> {
    config.validate()?;
    let cells_dir = out_dir.join("cells");
    fs::create_dir_all(&cells_dir).map_err(|e| MdsError::io(&cells_dir, e))?;

    let mut summary = Vec::new();
    let mut detail = Vec::new();
    let mut metrics = Vec::new();
    let mut resumed_cells = 0;
    for spec in config.scenarios() {
        for &algorithm in &config.algorithms {
            let name = cell_name(algorithm, &spec);
            let summary_file = cells_dir.join(format!("{name}.csv"));
            let detail_file = cells_dir.join(format!("{name}.detail.csv"));
            let cached = match (read_rows(&summary_file), read_rows(&detail_file)) {
                (Ok(s), Ok(d)) if s.len() == spec.replications => Some((s, d)),
                _ => None,
            };
            let (cell_summary, cell_detail) = match cached {
                Some(rows) => {
                    resumed_cells += 1;
                    rows
                }
                None => {
                    let results = (0..spec.replications)
                        .map(|rep| run_replication(config, algorithm, &spec, rep))
                        .collect::<Result<Vec<_>>>()?;
                    let rows = cell_rows(config, algorithm, &spec, &results);
                    write_rows(&detail_file, &rows.1)?;
                    // Summary last: its presence marks the cell complete.
                    write_rows(&summary_file, &rows.0)?;
                    rows
                }
            };
            metrics.push(metrics_from_rows(algorithm, &spec, &cell_detail));
            summary.extend(cell_summary);
            detail.extend(cell_detail);
        }
    }

    let summary_path = out_dir.join("summary.csv");
    let detail_path = out_dir.join("detail.csv");
    let metrics_path = out_dir.join("metrics.json");
    write_rows(&summary_path, &summary)?;
    write_rows(&detail_path, &detail)?;
    let json = serde_json::to_string_pretty(&metrics).map_err(|e| MdsError::format(&metrics_path, e.to_string()))?;
    fs::write(&metrics_path, json).map_err(|e| MdsError::io(&metrics_path, e))?;

    Ok(StudyOutput {
        summary_path,
        detail_path,
        metrics_path,
        metrics,
        resumed_cells,
    })
}

/// Connecting/sampling point count used by [`gof_sweep`] for the
/// divide-and-conquer and fast algorithms.
pub const SWEEP_ANCHOR_POINTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofSweep {
    pub h_star: usize,
    /// `(h, G1(h))` for every candidate evaluated, ascending.
    pub curve: Vec<(usize, f64)>,
}

/// Smallest dimension `h` whose aggregated G1 reaches `target`.
///
/// Candidates run upward from 1; `c = s = 100` for divide-and-conquer and
/// fast MDS, which also caps `h` at 100.
pub fn gof_sweep(
    data: &DataMatrix,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    target: f64,
) -> Result<GofSweep> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(MdsError::Param(format!("target must lie in (0, 1], got {target}")));
    }
    let mut params = *params;
    let mut h_max = data.ncols().min(data.nrows() - 1);
    if matches!(algorithm, Algorithm::Divide | Algorithm::Fast) {
        params.c = SWEEP_ANCHOR_POINTS;
        params.s = SWEEP_ANCHOR_POINTS;
        h_max = h_max.min(SWEEP_ANCHOR_POINTS);
    }
    let mut curve = Vec::new();
    for h in 1..=h_max {
        params.r = h;
        let g1 = match algorithm.run(data, &params) {
            Ok(cfg) => cfg.gof_g1,
            // No positive eigenvalue left at this h: later h cannot recover.
            Err(MdsError::DegenerateRank { .. }) => break,
            Err(e) => return Err(e),
        };
        curve.push((h, g1));
        if g1 >= target {
            return Ok(GofSweep { h_star: h, curve });
        }
    }
    Err(MdsError::Param(format!(
        "G1 never reaches {target} for h ≤ {h_max} (best {:.4})",
        curve.iter().map(|c| c.1).fold(0.0, f64::max)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_mds_from_data;

    fn column_var(data: &DataMatrix, j: usize) -> f64 {
        let col = data.column(j);
        let m = col.iter().sum::<f64>() / col.len() as f64;
        col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (col.len() - 1) as f64
    }

    #[test]
    fn generator_moments() {
        let spec = ScenarioSpec::new(100_000, 3, 1, 1, 11);
        let data = generate_scenario(&spec, 0).unwrap();
        let v0 = column_var(&data, 0);
        let v2 = column_var(&data, 2);
        assert!((14.5..=15.5).contains(&v0), "{v0}");
        assert!((0.97..=1.03).contains(&v2), "{v2}");
        let rho = pearson(&data.column(0), &data.column(1)).unwrap();
        assert!(rho.abs() <= 0.02);
    }

    #[test]
    fn generator_is_deterministic_per_replication() {
        let spec = ScenarioSpec::new(50, 4, 2, 2, 3);
        assert_eq!(generate_scenario(&spec, 1).unwrap(), generate_scenario(&spec, 1).unwrap());
        assert_ne!(generate_scenario(&spec, 0).unwrap(), generate_scenario(&spec, 1).unwrap());
        assert!(generate_scenario(&ScenarioSpec::new(50, 4, 5, 1, 3), 0).is_err());
    }

    #[test]
    fn correlations_survive_rotation_and_reflection() {
        let spec = ScenarioSpec::new(200, 2, 2, 1, 5);
        let x = generate_scenario(&spec, 0).unwrap().to_mat();
        let same = aligned_correlations(&x, &x).unwrap();
        assert!(same.iter().all(|&c| c == 1.0 || (c - 1.0).abs() < 1e-12));
        let (cs, sn) = (0.3f64.cos(), 0.3f64.sin());
        let rot = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => cs,
            (0, 1) => -sn,
            _ => sn,
        });
        let moved = Mat::from_fn(200, 2, |i, j| (&x * &rot)[(i, j)] + 4.0);
        for c in aligned_correlations(&moved, &x).unwrap() {
            assert!((c - 1.0).abs() < 1e-9);
        }
        let flipped = Mat::from_fn(200, 2, |i, j| -x[(i, j)]);
        for c in aligned_correlations(&flipped, &x).unwrap() {
            assert!((c - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_variance_is_metric_error() {
        let x = Mat::from_fn(10, 1, |i, _| i as f64);
        let flat = Mat::<f64>::zeros(10, 1);
        assert!(matches!(aligned_correlations(&flat, &x), Err(MdsError::Metric(_))));
    }

    #[test]
    fn eigen_stats_examples() {
        let s = eigenvalue_error_stats(&[vec![15.0], vec![15.0]], 15.0).unwrap();
        assert_eq!((s.bias[0], s.mse[0]), (0.0, 0.0));
        let s = eigenvalue_error_stats(&[vec![14.0], vec![16.0]], 15.0).unwrap();
        assert_eq!((s.bias[0], s.mse[0]), (0.0, 1.0));
        let s = eigenvalue_error_stats(&[vec![12.0]], 15.0).unwrap();
        assert_eq!((s.bias[0], s.mse[0]), (-3.0, 9.0));
        assert!(eigenvalue_error_stats(&[], 15.0).is_err());
    }

    #[test]
    fn full_grid_counts() {
        let grid = StudyConfig::full_scale();
        assert_eq!(grid.scenarios().len(), 100);
        grid.validate().unwrap();
        assert_eq!(StudyConfig::quick().scenarios().len(), 4);
    }

    #[test]
    fn tiny_study_writes_and_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let config = StudyConfig {
            seed: 1,
            sample_sizes: vec![600],
            dims: vec![4],
            dominant: vec![2],
            replications: 2,
            algorithms: vec![Algorithm::Interpolate],
            l: Some(200),
            c: None,
            timing: false,
        };
        let first = run_study(&config, dir.path()).unwrap();
        let text = fs::read_to_string(&first.summary_path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap(), STUDY_HEADER.join(","));
        assert_eq!(fs::read_to_string(&first.detail_path).unwrap().lines().count(), 5);
        assert_eq!(first.resumed_cells, 0);

        let second = run_study(&config, dir.path()).unwrap();
        assert_eq!(second.resumed_cells, 1);
        assert_eq!(fs::read_to_string(&second.summary_path).unwrap(), text);
        assert_eq!(first.metrics, second.metrics);
    }

    #[test]
    fn failures_become_rows() {
        let config = StudyConfig {
            seed: 1,
            sample_sizes: vec![300],
            dims: vec![3],
            dominant: vec![3],
            replications: 1,
            algorithms: vec![Algorithm::Divide],
            l: Some(100),
            c: None,
            timing: false,
        };
        let spec = &config.scenarios()[0];
        // A result that failed downstream still yields exactly one row.
        let failed = ReplicationResult {
            replication: 0,
            outcome: Err("boom".into()),
            elapsed_s: 0.0,
        };
        let (summary, detail) = cell_rows(&config, Algorithm::Divide, spec, &[failed]);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0][10], "boom");
        assert_eq!(metrics_from_rows(Algorithm::Divide, spec, &detail).failures.len(), 1);
    }

    #[test]
    fn sweep_single_dominant_direction() {
        // Column 1 carries 95% of the variance.
        let mut rng = stream_rng(4, 0);
        let mut normal = NormalSampler::new();
        let sd = [19f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt()];
        let data = DataMatrix::from_fn(300, 4, |_, j| sd[j] * normal.sample(&mut rng)).unwrap();
        let oracle = classical_mds_from_data(&data, 1).unwrap();
        assert!(oracle.gof_g1 > 0.9);
        let params = Algorithm::Classical.default_params(1, 0);
        let sweep = gof_sweep(&data, Algorithm::Classical, &params, 0.8).unwrap();
        assert_eq!(sweep.h_star, 1);
    }

    #[test]
    fn sweep_isotropic_needs_eight() {
        let spec = ScenarioSpec {
            dominant_sd: 1.0,
            ..ScenarioSpec::new(1000, 10, 1, 1, 9)
        };
        let data = generate_scenario(&spec, 0).unwrap();
        let params = Algorithm::Divide.default_params(1, 2);
        let sweep = gof_sweep(&data, Algorithm::Divide, &params, 0.8).unwrap();
        assert_eq!(sweep.h_star, 8);
        assert!(sweep.curve.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn sweep_rejects_bad_targets() {
        let data = generate_scenario(&ScenarioSpec::new(30, 3, 1, 1, 1), 0).unwrap();
        let params = Algorithm::Classical.default_params(1, 0);
        assert!(matches!(gof_sweep(&data, Algorithm::Classical, &params, 0.0), Err(MdsError::Param(_))));
        assert!(matches!(gof_sweep(&data, Algorithm::Classical, &params, 1.5), Err(MdsError::Param(_))));
    }
}
