//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 data error,
//! 3 numerical error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::algorithms::{Algorithm, AlgorithmParams};
use crate::error::{MdsError, Result};
use crate::io::{load_input, write_configuration, write_manifest, InputFormat, InputSummary, RunManifest};
use crate::plan::{fast_stats, plan_divide_conquer, plan_fast, plan_interpolation};
use crate::sim::{gof_sweep, run_study, StudyConfig};

#[derive(Debug, Parser)]
#[command(name = "bigmds", version, about = "Multidimensional scaling for large data sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Embed the rows of a data file.
    Mds(MdsArgs),
    /// Run a simulation grid described by a JSON file.
    Study {
        config: PathBuf,
        out_dir: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Find the smallest dimension whose G1 reaches a target.
    GofSweep(SweepArgs),
    /// Print partition statistics without running MDS.
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Csv)]
    input_format: InputFormat,
    /// The CSV input starts with a header line.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Args)]
struct TuningArgs {
    #[arg(long, value_enum, default_value_t = Algorithm::Classical)]
    algorithm: Algorithm,
    /// Partition size; 400 for divide, 1000 otherwise.
    #[arg(long)]
    l: Option<usize>,
    /// Connecting points; defaults to 2r.
    #[arg(long)]
    c: Option<usize>,
    /// Sampling points; defaults to 2r.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

impl TuningArgs {
    fn params(&self, r: usize) -> AlgorithmParams {
        let mut p = self.algorithm.default_params(r, self.seed);
        if let Some(l) = self.l {
            p.l = l;
        }
        if let Some(c) = self.c {
            p.c = c;
        }
        if let Some(s) = self.s {
            p.s = s;
        }
        p
    }
}

#[derive(Debug, Args)]
struct MdsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Target dimension.
    #[arg(long)]
    r: usize,
    /// Configuration CSV; printed to stdout when absent.
    #[arg(long)]
    out_config: Option<PathBuf>,
    #[arg(long)]
    out_manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    #[arg(long, default_value_t = 0.8)]
    target: f64,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long, value_enum, default_value_t = Algorithm::Fast)]
    algorithm: Algorithm,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Dimension used for the c = s = 2r defaults.
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the full plan as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<(T, usize)> {
    let threads = threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(MdsError::Param("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| MdsError::Param(format!("thread pool: {e}")))?;
    Ok((pool.install(job)?, threads))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Mds(args) => run_mds(args, out),
        Command::Study { config, out_dir, threads } => {
            let config = StudyConfig::from_json_file(&config)?;
            let (result, _) = with_threads(threads, || run_study(&config, &out_dir))?;
            for m in &result.metrics {
                let corr = if m.correlations.is_empty() { f64::NAN } else { m.mean_correlation() };
                write_out(
                    out,
                    &format!(
                        "{} n={} k={} h={} mean_correlation={corr:.5} failures={}",
                        m.algorithm, m.n, m.k, m.h, m.failures.len()
                    ),
                )?;
            }
            write_out(out, &format!("summary: {}", result.summary_path.display()))?;
            write_out(out, &format!("detail: {}", result.detail_path.display()))?;
            write_out(out, &format!("metrics: {}", result.metrics_path.display()))
        }
        Command::GofSweep(args) => {
            let data = load_input(&args.input.input, args.input.input_format, args.input.header)?;
            let params = args.tuning.params(1);
            let algorithm = args.tuning.algorithm;
            let (sweep, _) = with_threads(args.tuning.threads, || {
                gof_sweep(&data, algorithm, &params, args.target)
            })?;
            for (h, g1) in &sweep.curve {
                write_out(out, &format!("h={h} G1={g1:.6}"))?;
            }
            write_out(out, &format!("h_star={}", sweep.h_star))
        }
        Command::Plan(args) => run_plan(args, out),
    }
}

fn write_out(out: &mut impl Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| MdsError::io("<stdout>", e))
}

fn run_mds(args: MdsArgs, out: &mut impl Write) -> Result<()> {
    let input = &args.input;
    let data = load_input(&input.input, input.input_format, input.header)?;
    let params = args.tuning.params(args.r);
    let algorithm = args.tuning.algorithm;
    params.validate(algorithm)?;
    let start = Instant::now();
    let (config, threads) = with_threads(args.tuning.threads, || algorithm.run(&data, &params))?;
    let elapsed_s = start.elapsed().as_secs_f64();

    let mut outputs = Vec::new();
    match &args.out_config {
        Some(path) => {
            write_configuration(&config, path)?;
            outputs.push(path.clone());
        }
        None => {
            for i in 0..config.points.nrows() {
                let row: Vec<String> = (0..config.points.ncols())
                    .map(|j| format!("{:.16e}", config.points[(i, j)]))
                    .collect();
                write_out(out, &row.join(","))?;
            }
        }
    }
    if let Some(path) = &args.out_manifest {
        let manifest = RunManifest {
            algorithm,
            params,
            input: InputSummary {
                path: input.input.clone(),
                format: input.input_format,
                rows: data.nrows(),
                cols: data.ncols(),
            },
            outputs,
            gof_g1: config.gof_g1,
            gof_g2: config.gof_g2,
            eigenvalue_estimates: config.eigenvalue_estimates.clone(),
            degenerate_alignments: config.degenerate_alignments,
            elapsed_s,
            threads,
        };
        write_manifest(&manifest, path)?;
    }
    if config.degenerate_alignments > 0 {
        eprintln!(
            "warning: {} alignment(s) had a rank-deficient cross-product",
            config.degenerate_alignments
        );
    }
    Ok(())
}

fn dump_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let json = serde_json::to_string(value).map_err(|e| MdsError::format(path, e.to_string()))?;
    std::fs::write(path, json).map_err(|e| MdsError::io(path, e))
}

fn run_plan(args: PlanArgs, out: &mut impl Write) -> Result<()> {
    let l = args.l.unwrap_or(args.algorithm.default_partition_size());
    match args.algorithm {
        Algorithm::Fast => {
            let s = args.s.unwrap_or(2 * args.r);
            let stats = fast_stats(args.n, l, s)?;
            write_out(out, &format!("leaf_count={}", stats.leaf_count))?;
            write_out(out, &format!("mean={:.2}", stats.mean_leaf_size))?;
            write_out(out, &format!("depth={}", stats.depth))?;
            if let Some(path) = &args.json {
                dump_json(&plan_fast(args.n, l, s, args.seed)?, path)?;
            }
        }
        Algorithm::Divide => {
            let c = args.c.unwrap_or(2 * args.r);
            let plan = plan_divide_conquer(args.n, l, c, args.seed)?;
            write_out(out, &format!("subsets={}", plan.p()))?;
            write_out(out, &format!("connecting={}", plan.connecting_indices.len()))?;
            write_out(out, &format!("first_size={}", plan.subsets[0].len()))?;
            write_out(out, &format!("last_size={}", plan.subsets[plan.p() - 1].len()))?;
            if let Some(path) = &args.json {
                dump_json(&plan, path)?;
            }
        }
        Algorithm::Interpolate => {
            let plan = plan_interpolation(args.n, l, args.seed)?;
            write_out(out, &format!("subsets={}", plan.p()))?;
            write_out(out, &format!("base_size={}", plan.subsets[0].len()))?;
            write_out(out, &format!("last_size={}", plan.subsets[plan.p() - 1].len()))?;
            if let Some(path) = &args.json {
                dump_json(&plan, path)?;
            }
        }
        Algorithm::Classical => {
            return Err(MdsError::Param("classical MDS has no partition plan".into()));
        }
    }
    Ok(())
}
