//! `highdim`: sample point clouds, evaluate tail bounds, project, measure
//! distortion, and run the named experiments, all from one binary.
//!
//! The binary is a thin adapter over the `highdim` library: it parses
//! flags, resolves a seed, and prints what the library returns. Exit codes:
//! 0 success, 2 argument or domain error, 3 resource-cap refusal,
//! 4 degenerate input. Every failure is a single stderr line of the form
//! `ERROR <code>: <message>`. Runs echo their resolved parameters
//! (including a defaulted seed) to stderr so results stay reproducible.

mod bounds;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use highdim::error::{Error, Result};
use highdim::experiments::{self, ExperimentConfig};
use highdim::projection::{make_projection, max_distortion, project};
use highdim::samplers::{sample, DistributionSpec};
use highdim::seed::RandomSeed;
use highdim::io as hio;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "highdim",
    version,
    about = "Seeded high-dimensional sampling, tail bounds, and random projections",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a seeded point cloud and write it as CSV plus a JSON sidecar.
    Sample {
        /// Source distribution: gaussian, ball, or cube.
        #[arg(long)]
        dist: String,
        /// Ambient dimension.
        #[arg(long)]
        d: usize,
        /// Number of points.
        #[arg(long)]
        n: usize,
        /// Per-coordinate standard deviation (gaussian only).
        #[arg(long)]
        sigma: Option<f64>,
        /// Root seed; drawn from OS entropy and echoed when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a named closed-form bound and print it as JSON.
    ///
    /// Parameters are key=value pairs, e.g. `bounds annulus epsilon=10 d=200`.
    /// Run `bounds --list` for the full registry.
    Bounds {
        name: Option<String>,
        /// key=value parameters for the named bound.
        params: Vec<String>,
        /// List every bound name with its required parameters.
        #[arg(long)]
        list: bool,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a point cloud CSV to k dimensions with a fresh random matrix.
    Project {
        /// Input cloud (written by `sample` or compatible).
        #[arg(long = "in")]
        input: PathBuf,
        /// Target dimension.
        #[arg(long)]
        k: usize,
        /// Seed for the projection matrix; OS entropy when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also persist the matrix (CSV if the path ends in .csv, else raw
        /// little-endian f64), with a JSON sidecar.
        #[arg(long)]
        save_matrix: Option<PathBuf>,
    },
    /// Measure worst-case pairwise distance distortion between two clouds.
    Distort {
        /// Original cloud CSV.
        #[arg(long)]
        orig: PathBuf,
        /// Projected cloud CSV, same point order.
        #[arg(long)]
        proj: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment and write its report.
    ///
    /// A JSON config file can replace or refine the name; explicit flags win
    /// over config fields. Known names: norm_table, distance_table,
    /// dot_table, norm_histogram, ball_concentration, annulus_violation,
    /// gaussian_angle, jl_curve, dice_chernoff.
    Experiment {
        name: Option<String>,
        /// JSON config; missing fields fall back to the experiment defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed; OS entropy when neither is present.
        #[arg(long)]
        seed: Option<u64>,
        /// Report JSON destination; stdout when omitted and the config names
        /// no output_path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the rows as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("bad arguments");
            let line = line.strip_prefix("error: ").unwrap_or(line);
            eprintln!("ERROR 2: {line}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("ERROR {code}: {e}");
            ExitCode::from(code as u8)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Sample { dist, d, n, sigma, seed, out } => run_sample(&dist, d, n, sigma, seed, &out),
        Cmd::Bounds { name, params, list, out } => run_bounds(name, &params, list, out.as_deref()),
        Cmd::Project { input, k, seed, out, save_matrix } => {
            run_project(&input, k, seed, &out, save_matrix.as_deref())
        }
        Cmd::Distort { orig, proj, out } => run_distort(&orig, &proj, out.as_deref()),
        Cmd::Experiment { name, config, seed, out, csv } => {
            run_experiment(name, config.as_deref(), seed, out.as_deref(), csv.as_deref())
        }
    }
}

/// 8 bytes of OS entropy; falls back to the clock if the entropy device is
/// unavailable.
fn entropy_seed() -> u64 {
    use std::io::Read;
    let mut buf = [0u8; 8];
    match std::fs::File::open("/dev/urandom").and_then(|mut f| f.read_exact(&mut buf)) {
        Ok(()) => u64::from_le_bytes(buf),
        Err(_) => std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0x9E3779B97F4A7C15),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(entropy_seed)
}

fn run_sample(
    dist: &str,
    d: usize,
    n: usize,
    sigma: Option<f64>,
    seed: Option<u64>,
    out: &Path,
) -> Result<()> {
    let spec = match dist {
        "gaussian" => DistributionSpec::gaussian(d, sigma.unwrap_or(1.0))?,
        "ball" | "cube" => {
            if sigma.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "--sigma only applies to gaussian, not {dist}"
                )));
            }
            if dist == "ball" {
                DistributionSpec::ball(d)?
            } else {
                DistributionSpec::cube(d)?
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown distribution {other:?}; use gaussian, ball, or cube"
            )));
        }
    };
    let seed = resolve_seed(seed);
    eprintln!(
        "sample: dist={dist} d={d} n={n} sigma={} seed={seed} out={}",
        spec.sigma,
        out.display()
    );
    let cloud = sample(&spec, n, RandomSeed(seed))?;
    hio::write_points_csv(out, &cloud)
}

fn run_bounds(
    name: Option<String>,
    params: &[String],
    list: bool,
    out: Option<&Path>,
) -> Result<()> {
    if list {
        for line in bounds::registry_lines() {
            println!("{line}");
        }
        return Ok(());
    }
    let name = name.ok_or_else(|| {
        Error::InvalidArgument("bounds needs a name; try `bounds --list`".into())
    })?;
    let result = bounds::evaluate(&name, params)?;
    emit_json(out, &result.to_json())
}

fn run_project(
    input: &Path,
    k: usize,
    seed: Option<u64>,
    out: &Path,
    save_matrix: Option<&Path>,
) -> Result<()> {
    let cloud = hio::read_points_csv(input)?;
    let seed = resolve_seed(seed);
    eprintln!(
        "project: in={} d={} n={} k={k} seed={seed} out={}",
        input.display(),
        cloud.dim(),
        cloud.len(),
        out.display()
    );
    let proj = make_projection(cloud.dim(), k, RandomSeed(seed))?;
    let image = project(&proj, &cloud)?;
    hio::write_points_csv(out, &image)?;
    if let Some(path) = save_matrix {
        hio::write_projection(path, &proj)?;
    }
    Ok(())
}

fn run_distort(orig: &Path, proj: &Path, out: Option<&Path>) -> Result<()> {
    let a = hio::read_points_csv(orig)?;
    let b = hio::read_points_csv(proj)?;
    let report = max_distortion(&a, &b)?;
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    emit_json(out, &text)
}

fn run_experiment(
    name: Option<String>,
    config: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let mut cfg: ExperimentConfig = match (config, &name) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        (None, Some(n)) => ExperimentConfig::defaults_for(n)?,
        (None, None) => {
            return Err(Error::InvalidArgument(format!(
                "experiment needs a name or --config; known names: {}",
                experiments::EXPERIMENT_NAMES.join(", ")
            )));
        }
    };
    if let Some(n) = name {
        if config.is_some() && !cfg.name.is_empty() && cfg.name != n {
            return Err(Error::InvalidArgument(format!(
                "name {n:?} disagrees with config name {:?}",
                cfg.name
            )));
        }
        cfg.name = n;
    }
    if let Some(s) = seed {
        cfg.seed = Some(s);
    }
    if cfg.seed.is_none() {
        cfg.seed = Some(entropy_seed());
    }
    let cfg = cfg.resolve()?;
    eprintln!(
        "experiment: {}",
        serde_json::to_string(&cfg).map_err(|e| Error::Parse(format!("serialize: {e}")))?
    );
    let report = experiments::run(&cfg)?;
    let dest = out
        .map(PathBuf::from)
        .or_else(|| report.config.output_path.as_ref().map(PathBuf::from));
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    emit_json(dest.as_deref(), &text)?;
    if let Some(path) = csv {
        hio::write_text(path, &report.csv_string())?;
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => hio::write_text(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
