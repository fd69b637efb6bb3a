//! Named, seeded Monte-Carlo experiments producing tabular reports.
//!
//! Every experiment is a pure function of its config: same config in, same
//! rows out, bit for bit, regardless of thread count. Parallel sections
//! split work into fixed blocks that each derive their own child seed, so
//! the draws never depend on scheduling. `wall_time_seconds` is the one
//! field that varies between runs.
//!
//! Reports hold rows of f64 plus a column-name header; the CSV rendering
//! writes floats with 17 significant digits so re-parsing is lossless.

use crate::error::{Error, Result};
use crate::projection::{make_projection, max_distortion, project};
use crate::samplers::{sample, DistributionSpec};
use crate::seed::RandomSeed;
use crate::stats::{self, histogram, norms, pairwise_distances, pairwise_dots};
use crate::tailbounds;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Refuse single allocations past this many scalar draws (`n * d`).
pub const MAX_CELLS: u64 = 1_000_000_000;

/// Trials per parallel block in the dice simulation. Part of the output
/// contract: changing it would reshuffle which seed serves which trial.
const DICE_BLOCK: usize = 4096;

pub const EXPERIMENT_NAMES: &[&str] = &[
    "norm_table",
    "distance_table",
    "dot_table",
    "norm_histogram",
    "ball_concentration",
    "annulus_violation",
    "gaussian_angle",
    "jl_curve",
    "dice_chernoff",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub name: String,
    /// Ambient dimensions to sweep. Empty means "use the experiment default".
    #[serde(default)]
    pub dims: Vec<usize>,
    /// Points, pairs, or rolls depending on the experiment; 0 means default.
    #[serde(default)]
    pub n: usize,
    /// Root seed. Omitted in a config file means the caller must supply one
    /// (the CLI draws from OS entropy and echoes it back).
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub epsilon_grid: Vec<f64>,
    #[serde(default)]
    pub k_grid: Vec<usize>,
    /// Independent repetitions where the experiment uses them; 0 = default.
    #[serde(default)]
    pub repetitions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

fn schema_version() -> u32 {
    1
}

impl ExperimentConfig {
    /// The documented default run for `name`, seed left for the caller.
    pub fn defaults_for(name: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig {
            schema: 1,
            name: name.to_string(),
            dims: Vec::new(),
            n: 0,
            seed: None,
            epsilon_grid: Vec::new(),
            k_grid: Vec::new(),
            repetitions: 1,
            output_path: None,
        };
        match name {
            "norm_table" => {
                cfg.dims = vec![1, 10, 100, 1_000, 10_000, 100_000, 1_000_000];
                cfg.n = 100;
            }
            "distance_table" => {
                cfg.dims = vec![1, 10, 100, 1_000, 10_000, 100_000];
                cfg.n = 100;
            }
            "dot_table" => {
                cfg.dims = vec![1, 10, 100, 1_000, 10_000, 100_000];
                cfg.n = 100;
            }
            "norm_histogram" => {
                cfg.dims = vec![100];
                cfg.n = 50_000;
            }
            "ball_concentration" => {
                cfg.dims = vec![100];
                cfg.n = 10;
                cfg.repetitions = 500;
            }
            "annulus_violation" => {
                cfg.dims = vec![200];
                cfg.n = 100_000;
                cfg.epsilon_grid = vec![1.0, 4.0, 6.0, 8.0, 10.0];
            }
            "gaussian_angle" => {
                cfg.dims = vec![100, 10_000];
                cfg.n = 10_000;
                cfg.epsilon_grid = vec![0.1];
            }
            "jl_curve" => {
                cfg.dims = vec![1_000];
                cfg.n = 300;
                cfg.k_grid = (1..=48).map(|i| i * 20).collect();
            }
            "dice_chernoff" => {
                cfg.n = 100;
                cfg.repetitions = 1_000_000;
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown experiment {other:?}; known: {}",
                    EXPERIMENT_NAMES.join(", ")
                )));
            }
        }
        Ok(cfg)
    }

    /// Fills empty fields from the experiment defaults and validates the
    /// rest. The echoed config in a report is always in resolved form.
    pub fn resolve(mut self) -> Result<ExperimentConfig> {
        let base = ExperimentConfig::defaults_for(&self.name)?;
        if self.dims.is_empty() {
            self.dims = base.dims;
        }
        if self.n == 0 {
            self.n = base.n;
        }
        if self.epsilon_grid.is_empty() {
            self.epsilon_grid = base.epsilon_grid;
        }
        if self.k_grid.is_empty() {
            self.k_grid = base.k_grid;
        }
        if self.repetitions == 0 {
            self.repetitions = base.repetitions;
        }
        self.schema = 1;
        if self.seed.is_none() {
            return Err(Error::InvalidArgument(
                "config has no seed; pass one explicitly".into(),
            ));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("dims must all be at least 1".into()));
        }
        for &e in &self.epsilon_grid {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "epsilon grid entry {e} is not a positive finite number"
                )));
            }
        }
        Ok(self)
    }

    fn root(&self) -> RandomSeed {
        RandomSeed(self.seed.expect("resolve() guarantees a seed"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub name: String,
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub wall_time_seconds: f64,
}

impl ExperimentReport {
    pub fn csv_string(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| crate::io::fmt_float(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidArgument(format!("report has no column {name:?}")))
    }
}

/// Dispatch on `config.name`. Defaults are filled in first, so a minimal
/// config of name plus seed runs the documented baseline.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let cfg = config.clone().resolve()?;
    let start = Instant::now();
    let (columns, rows) = match cfg.name.as_str() {
        "norm_table" => norm_table_rows(&cfg)?,
        "distance_table" => distance_table_rows(&cfg)?,
        "dot_table" => dot_table_rows(&cfg)?,
        "norm_histogram" => norm_histogram_rows(&cfg)?,
        "ball_concentration" => ball_rows(&cfg)?,
        "annulus_violation" => annulus_rows(&cfg)?,
        "gaussian_angle" => gaussian_angle_rows(&cfg)?,
        "jl_curve" => jl_curve_rows(&cfg)?,
        "dice_chernoff" => dice_rows(&cfg)?,
        other => unreachable!("resolve() admitted unknown experiment {other}"),
    };
    finish(cfg, columns, rows, start)
}

macro_rules! named_runner {
    ($fn_name:ident, $name:literal) => {
        pub fn $fn_name(config: &ExperimentConfig) -> Result<ExperimentReport> {
            let mut cfg = config.clone();
            cfg.name = $name.to_string();
            run(&cfg)
        }
    };
}

named_runner!(run_norm_table, "norm_table");
named_runner!(run_distance_table, "distance_table");
named_runner!(run_dot_table, "dot_table");
named_runner!(run_norm_histogram, "norm_histogram");
named_runner!(run_ball_experiments, "ball_concentration");
named_runner!(run_annulus_violation, "annulus_violation");
named_runner!(run_gaussian_angle, "gaussian_angle");
named_runner!(run_jl_curve, "jl_curve");
named_runner!(run_dice_chernoff, "dice_chernoff");

fn finish(
    cfg: ExperimentConfig,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    start: Instant,
) -> Result<ExperimentReport> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != columns.len() {
            return Err(Error::InvalidArgument(format!(
                "row {i} has {} cells for {} columns",
                row.len(),
                columns.len()
            )));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("row {i} contains non-finite cell {bad}")));
        }
    }
    Ok(ExperimentReport {
        schema: 1,
        name: cfg.name.clone(),
        columns,
        rows,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        config: cfg,
    })
}

fn check_cells(n: usize, d: usize) -> Result<()> {
    let cells = n as u64 * d as u64;
    if cells > MAX_CELLS {
        return Err(Error::ResourceCap(format!(
            "n*d = {cells} exceeds the {MAX_CELLS} scalar cap; shrink n or dims"
        )));
    }
    Ok(())
}

type Table = Result<(Vec<String>, Vec<Vec<f64>>)>;

/// Norms of standard Gaussian samples per dimension, against sqrt(d).
/// Points are streamed one at a time, so memory stays O(d) even at d = 1e6.
fn norm_table_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let n = cfg.n;
    for &d in &cfg.dims {
        check_cells(n, d)?;
    }
    let rows: Result<Vec<Vec<f64>>> = cfg
        .dims
        .par_iter()
        .enumerate()
        .map(|(di, &d)| {
            let spec = DistributionSpec::gaussian(d, 1.0)?;
            let mut stream = spec.stream(root.child(di as u64));
            let mut buf = vec![0.0; d];
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                stream.fill_next(&mut buf);
                values.push(stats::euclidean_norm(&buf));
            }
            let s = stats::summarize(&values)?;
            Ok(vec![
                d as f64,
                n as f64,
                s.mean,
                (d as f64).sqrt(),
                s.variance.unwrap_or(0.0),
                s.min,
                s.max,
            ])
        })
        .collect();
    Ok((
        str_cols(&["d", "n", "mean_norm", "sqrt_d", "variance_norm", "min_norm", "max_norm"]),
        rows?,
    ))
}

/// Pairwise distances between Gaussian samples, against sqrt(2d).
fn distance_table_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let n = cfg.n;
    for &d in &cfg.dims {
        check_cells(n, d)?;
    }
    let rows: Result<Vec<Vec<f64>>> = cfg
        .dims
        .iter()
        .enumerate()
        .map(|(di, &d)| {
            let spec = DistributionSpec::gaussian(d, 1.0)?;
            let cloud = sample(&spec, n, root.child(di as u64))?;
            let dist = pairwise_distances(&cloud)?;
            let s = stats::summarize(&dist)?;
            Ok(vec![
                d as f64,
                n as f64,
                dist.len() as f64,
                s.mean,
                (2.0 * d as f64).sqrt(),
                s.variance.unwrap_or(0.0),
            ])
        })
        .collect();
    Ok((
        str_cols(&["d", "n", "pairs", "mean_distance", "sqrt_2d", "variance_distance"]),
        rows?,
    ))
}

/// Pairwise dot products, raw and normalized, with standard errors.
fn dot_table_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let n = cfg.n;
    for &d in &cfg.dims {
        check_cells(n, d)?;
    }
    let rows: Result<Vec<Vec<f64>>> = cfg
        .dims
        .iter()
        .enumerate()
        .map(|(di, &d)| {
            let spec = DistributionSpec::gaussian(d, 1.0)?;
            let cloud = sample(&spec, n, root.child(di as u64))?;
            let raw = pairwise_dots(&cloud, false)?;
            let unit = pairwise_dots(&cloud, true)?;
            let sr = stats::summarize(&raw)?;
            let su = stats::summarize(&unit)?;
            let m = raw.len() as f64;
            let stderr = |s: &stats::SummaryStats| (s.variance.unwrap_or(0.0) / m).sqrt();
            Ok(vec![
                d as f64,
                n as f64,
                m,
                sr.mean,
                stderr(&sr),
                su.mean,
                stderr(&su),
            ])
        })
        .collect();
    Ok((
        str_cols(&[
            "d",
            "n",
            "pairs",
            "mean_dot",
            "stderr_dot",
            "mean_dot_normalized",
            "stderr_dot_normalized",
        ]),
        rows?,
    ))
}

/// Distribution of Gaussian norms at one dimension, binned over a fixed
/// window. Rows are bins, not dimensions; mass outside the window is the
/// difference between n and the column sum.
fn norm_histogram_rows(cfg: &ExperimentConfig) -> Table {
    let d = cfg.dims[0];
    let n = cfg.n;
    check_cells(n, d)?;
    let spec = DistributionSpec::gaussian(d, 1.0)?;
    let mut stream = spec.stream(cfg.root().child(0));
    let mut buf = vec![0.0; d];
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        stream.fill_next(&mut buf);
        values.push(stats::euclidean_norm(&buf));
    }
    let hist = histogram(&values, 6.8, 13.1, 63)?;
    let rows = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| vec![hist.edges[i], hist.edges[i + 1], c as f64])
        .collect();
    Ok((str_cols(&["bin_left", "bin_right", "count"]), rows))
}

/// How often n points in the unit ball all sit in the outer shell and all
/// pairwise angles stay near orthogonal, versus the 1 - 1/n guarantee.
///
/// At small d the thresholds can pass 1 and the guarantee is vacuous; the
/// trivial flags record that instead of failing the run, so low-dimension
/// sweeps still produce rows.
fn ball_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let n = cfg.n;
    if n < 2 {
        return Err(Error::InvalidArgument(
            "ball concentration needs n >= 2 for pairwise angles".into(),
        ));
    }
    let reps = cfg.repetitions;
    let mut rows = Vec::with_capacity(cfg.dims.len());
    for (di, &d) in cfg.dims.iter().enumerate() {
        if d < 3 {
            return Err(Error::InvalidArgument(
                "ball concentration needs d >= 3 for the norm and angle thresholds".into(),
            ));
        }
        check_cells(n * reps, d)?;
        let surface = tailbounds::ball_surface_threshold(n, d)?;
        let angle = tailbounds::ball_angle_threshold(n, d)?;
        let eps_norm = surface.inputs["epsilon"];
        let eps_angle = angle.inputs["epsilon"];
        let dim_seed = root.child(di as u64);
        let spec = DistributionSpec::ball(d)?;
        let hits: (u64, u64, u64) = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<(u64, u64, u64)> {
                let cloud = sample(&spec, n, dim_seed.child(r as u64))?;
                let radius_ok = norms(&cloud).iter().all(|&v| v >= 1.0 - eps_norm);
                let raw_ok =
                    pairwise_dots(&cloud, false)?.iter().all(|v| v.abs() <= eps_angle);
                let unit_ok =
                    pairwise_dots(&cloud, true)?.iter().all(|v| v.abs() <= eps_angle);
                Ok((radius_ok as u64, raw_ok as u64, unit_ok as u64))
            })
            .try_reduce(
                || (0, 0, 0),
                |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)),
            )?;
        let freq = |c: u64| c as f64 / reps as f64;
        rows.push(vec![
            d as f64,
            n as f64,
            reps as f64,
            eps_norm,
            freq(hits.0),
            eps_angle,
            freq(hits.1),
            freq(hits.2),
            1.0 - 1.0 / n as f64,
            (!surface.valid) as u64 as f64,
            (!angle.valid) as u64 as f64,
        ]);
    }
    Ok((
        str_cols(&[
            "d",
            "n",
            "repetitions",
            "epsilon_norm",
            "freq_all_in_shell",
            "epsilon_angle",
            "freq_angles_ok",
            "freq_angles_ok_normalized",
            "guarantee",
            "norm_trivial",
            "angle_trivial",
        ]),
        rows,
    ))
}

/// Fraction of Gaussian norms falling outside sqrt(d) +- eps, against the
/// sub-Gaussian annulus bound. One cloud per dimension serves every eps.
fn annulus_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let n = cfg.n;
    let mut rows = Vec::new();
    for (di, &d) in cfg.dims.iter().enumerate() {
        check_cells(n, d)?;
        let spec = DistributionSpec::gaussian(d, 1.0)?;
        let mut stream = spec.stream(root.child(di as u64));
        let mut buf = vec![0.0; d];
        let mut radii = Vec::with_capacity(n);
        for _ in 0..n {
            stream.fill_next(&mut buf);
            radii.push(stats::euclidean_norm(&buf));
        }
        let sqrt_d = (d as f64).sqrt();
        for &eps in &cfg.epsilon_grid {
            let bound = tailbounds::gaussian_annulus_bound(eps, d)?;
            let violations =
                radii.iter().filter(|&&r| (r - sqrt_d).abs() >= eps).count();
            rows.push(vec![
                d as f64,
                eps,
                n as f64,
                violations as f64,
                violations as f64 / n as f64,
                bound.value,
                bound.valid as u64 as f64,
            ]);
        }
    }
    Ok((
        str_cols(&["d", "epsilon", "n", "violations", "frequency", "bound", "bound_valid"]),
        rows,
    ))
}

/// Near-orthogonality and anti-concentration of angles between independent
/// Gaussian pairs. Each row tests one (d, eps): how often the normalized
/// dot exceeds eps, and how often it lands within eps/(2 sqrt(d)) of zero.
fn gaussian_angle_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let pairs = cfg.n;
    let mut rows = Vec::new();
    for (di, &d) in cfg.dims.iter().enumerate() {
        check_cells(pairs.saturating_mul(2), d)?;
        let spec = DistributionSpec::gaussian(d, 1.0)?;
        let mut stream = spec.stream(root.child(di as u64));
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        let mut cosines = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            stream.fill_next(&mut x);
            stream.fill_next(&mut y);
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let nx = stats::euclidean_norm(&x);
            let ny = stats::euclidean_norm(&y);
            if nx == 0.0 || ny == 0.0 {
                return Err(Error::DegenerateInput(
                    "drew a zero-norm Gaussian point; angle undefined".into(),
                ));
            }
            cosines.push(dot / (nx * ny));
        }
        for &eps in &cfg.epsilon_grid {
            let orth = tailbounds::gaussian_orthogonality_bound(eps, d)?;
            let anti = tailbounds::gaussian_anticoncentration_bound(eps, d)?;
            let near_zero = anti.inputs["threshold"];
            let orth_hits = cosines.iter().filter(|c| c.abs() > eps).count();
            let anti_hits = cosines.iter().filter(|c| c.abs() <= near_zero).count();
            rows.push(vec![
                d as f64,
                pairs as f64,
                eps,
                orth_hits as f64 / pairs as f64,
                orth.value,
                near_zero,
                anti_hits as f64 / pairs as f64,
                anti.value,
            ]);
        }
    }
    Ok((
        str_cols(&[
            "d",
            "pairs",
            "epsilon",
            "orth_frequency",
            "orth_bound",
            "anti_threshold",
            "anti_frequency",
            "anti_bound",
        ]),
        rows,
    ))
}

/// Observed worst-case distance distortion of one Gaussian cloud under
/// random projections, one fresh projection per target dimension k, with
/// the sqrt(48 ln n / k) curve alongside.
fn jl_curve_rows(cfg: &ExperimentConfig) -> Table {
    let root = cfg.root();
    let d = cfg.dims[0];
    let n = cfg.n;
    check_cells(n, d)?;
    if cfg.k_grid.is_empty() {
        return Err(Error::InvalidArgument("jl_curve needs a nonempty k grid".into()));
    }
    let spec = DistributionSpec::gaussian(d, 1.0)?;
    let cloud = sample(&spec, n, root.child(0))?;
    let curve = (48.0 * (n as f64).ln()).sqrt();
    let rows: Result<Vec<Vec<f64>>> = cfg
        .k_grid
        .par_iter()
        .enumerate()
        .map(|(ki, &k)| {
            let proj = make_projection(d, k, root.child(1 + ki as u64))?;
            let image = project(&proj, &cloud)?;
            let rep = max_distortion(&cloud, &image)?;
            Ok(vec![
                k as f64,
                rep.epsilon_observed,
                rep.ratio_min,
                rep.ratio_max,
                rep.pairs_evaluated as f64,
                curve / (k as f64).sqrt(),
            ])
        })
        .collect();
    Ok((
        str_cols(&[
            "k",
            "epsilon_observed",
            "ratio_min",
            "ratio_max",
            "pairs",
            "epsilon_bound",
        ]),
        rows?,
    ))
}

/// Count successes out of `rolls` Bernoulli(p) draws, `trials` times, and
/// report how many trials reach `threshold`. Blocks of trials run in
/// parallel on their own child seeds; counts are exact integers, so the
/// reduction order cannot change the result.
pub fn simulate_threshold_trials(
    trials: usize,
    rolls: usize,
    threshold: usize,
    p: f64,
    seed: RandomSeed,
) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not in [0, 1]")));
    }
    if rolls == 0 || trials == 0 {
        return Err(Error::InvalidArgument("trials and rolls must be positive".into()));
    }
    let blocks = trials.div_ceil(DICE_BLOCK);
    let qualifying = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed.child(b as u64).rng();
            let in_block = DICE_BLOCK.min(trials - b * DICE_BLOCK);
            let mut hits = 0u64;
            for _ in 0..in_block {
                let mut successes = 0usize;
                for _ in 0..rolls {
                    successes += (rng.next_f64() < p) as usize;
                }
                hits += (successes >= threshold) as u64;
            }
            hits
        })
        .sum();
    Ok(qualifying)
}

/// Fair-die simulation: probability that `n` rolls produce at least 70%
/// sixes, against the Markov, Chebyshev, and Chernoff bounds for that tail.
fn dice_rows(cfg: &ExperimentConfig) -> Table {
    let rolls = cfg.n;
    let trials = cfg.repetitions;
    let p = 1.0 / 6.0;
    let threshold = (0.7 * rolls as f64).ceil() as usize;
    let mean = rolls as f64 / 6.0;
    let a = threshold as f64;
    if a <= mean {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} does not exceed the mean {mean}; no tail to bound"
        )));
    }
    let qualifying =
        simulate_threshold_trials(trials, rolls, threshold, p, cfg.root())?;
    let markov = tailbounds::markov_bound(mean, a)?;
    let chebyshev = tailbounds::chebyshev_bound(rolls as f64 * p * (1.0 - p), a - mean)?;
    let chernoff = tailbounds::bernoulli_chernoff(rolls, p, a * 6.0 / rolls as f64 - 1.0)?;
    let row = vec![
        trials as f64,
        rolls as f64,
        a,
        qualifying as f64,
        qualifying as f64 / trials as f64,
        markov.value,
        chebyshev.value,
        chernoff.value,
    ];
    Ok((
        str_cols(&[
            "trials",
            "rolls",
            "threshold",
            "qualifying",
            "empirical_probability",
            "markov",
            "chebyshev",
            "chernoff",
        ]),
        vec![row],
    ))
}

fn str_cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(name: &str, seed: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults_for(name).unwrap();
        c.seed = Some(seed);
        c
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(
            ExperimentConfig::defaults_for("norm_tables"),
            Err(Error::InvalidArgument(_))
        ));
        let c = ExperimentConfig {
            name: "nope".into(),
            seed: Some(1),
            ..ExperimentConfig::defaults_for("norm_table").unwrap()
        };
        assert!(run(&c).is_err());
    }

    #[test]
    fn missing_seed_is_rejected() {
        let c = ExperimentConfig::defaults_for("norm_table").unwrap();
        assert!(matches!(run(&c), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn resource_cap_refuses_huge_tables() {
        let mut c = cfg("norm_table", 1);
        c.dims = vec![2_000_000_000];
        c.n = 10;
        assert!(matches!(run(&c), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn norm_table_small_dims_match_theory() {
        let mut c = cfg("norm_table", 31);
        c.dims = vec![1, 16, 256];
        c.n = 4_000;
        let rep = run(&c).unwrap();
        assert_eq!(rep.rows.len(), 3);
        let mean = rep.column("mean_norm").unwrap();
        let sqrt_d = rep.column("sqrt_d").unwrap();
        let var = rep.column("variance_norm").unwrap();
        // d = 1: E|X| = sqrt(2/pi), Var|X| = 1 - 2/pi.
        assert!((rep.rows[0][mean] - 0.7978845608028654).abs() < 0.03);
        assert!((rep.rows[0][var] - 0.3633802276324187).abs() < 0.03);
        // Larger d: mean within a few percent of sqrt(d), variance near 1/2.
        for row in &rep.rows[1..] {
            assert!((row[mean] / row[sqrt_d] - 1.0).abs() < 0.05);
            assert!(row[var] < 1.0);
        }
    }

    #[test]
    fn distance_and_dot_tables_track_growth() {
        let mut c = cfg("distance_table", 9);
        c.dims = vec![64, 1024];
        c.n = 60;
        let rep = run(&c).unwrap();
        let mean = rep.column("mean_distance").unwrap();
        let target = rep.column("sqrt_2d").unwrap();
        for row in &rep.rows {
            assert!((row[mean] / row[target] - 1.0).abs() < 0.05);
        }
        assert_eq!(rep.rows[0][rep.column("pairs").unwrap()], (60.0 * 59.0) / 2.0);

        let mut c = cfg("dot_table", 9);
        c.dims = vec![64, 1024];
        c.n = 60;
        let rep = run(&c).unwrap();
        let m = rep.column("mean_dot_normalized").unwrap();
        let se = rep.column("stderr_dot_normalized").unwrap();
        for row in &rep.rows {
            // Pairs share points, so allow generous slack over the iid stderr.
            assert!(row[m].abs() < 8.0 * row[se]);
        }
    }

    #[test]
    fn histogram_rows_cover_the_window() {
        let mut c = cfg("norm_histogram", 5);
        c.n = 2_000;
        let rep = run(&c).unwrap();
        assert_eq!(rep.rows.len(), 63);
        assert!((rep.rows[0][0] - 6.8).abs() < 1e-12);
        assert!((rep.rows[62][1] - 13.1).abs() < 1e-9);
        let total: f64 = rep.rows.iter().map(|r| r[2]).sum();
        // d = 100 norms concentrate near 10; the window should catch nearly all.
        assert!(total >= 0.99 * c.n as f64);
    }

    #[test]
    fn ball_flags_trip_only_in_low_dimension() {
        let mut c = cfg("ball_concentration", 3);
        c.dims = vec![3, 100];
        c.n = 10;
        c.repetitions = 8;
        let rep = run(&c).unwrap();
        let norm_trivial = rep.column("norm_trivial").unwrap();
        let angle_trivial = rep.column("angle_trivial").unwrap();
        assert_eq!(rep.rows[0][norm_trivial], 1.0); // 2 ln 10 / 3 > 1
        assert_eq!(rep.rows[0][angle_trivial], 1.0);
        assert_eq!(rep.rows[1][norm_trivial], 0.0);
        assert_eq!(rep.rows[1][angle_trivial], 0.0);
    }

    #[test]
    fn dice_counts_are_thread_invariant() {
        // Same seed, different pool widths: identical qualifying counts.
        let a = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate_threshold_trials(20_000, 30, 10, 1.0 / 6.0, RandomSeed(8)))
            .unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| simulate_threshold_trials(20_000, 30, 10, 1.0 / 6.0, RandomSeed(8)))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loaded_die_always_qualifies() {
        let hits = simulate_threshold_trials(5_000, 40, 28, 1.0, RandomSeed(1)).unwrap();
        assert_eq!(hits, 5_000);
        let none = simulate_threshold_trials(5_000, 40, 1, 0.0, RandomSeed(1)).unwrap();
        assert_eq!(none, 0);
    }

    #[test]
    fn reports_are_reproducible_modulo_wall_time() {
        for name in ["annulus_violation", "gaussian_angle", "jl_curve"] {
            let mut c = cfg(name, 77);
            c.n = 500;
            c.dims = vec![300];
            if name == "jl_curve" {
                c.n = 40;
                c.k_grid = vec![10, 60];
            }
            let mut a = run(&c).unwrap();
            let mut b = run(&c).unwrap();
            a.wall_time_seconds = 0.0;
            b.wall_time_seconds = 0.0;
            assert_eq!(a, b, "{name} differed between runs");
        }
    }

    #[test]
    fn csv_rendering_has_header_and_full_precision() {
        let mut c = cfg("dice_chernoff", 2);
        c.repetitions = 2_000;
        let rep = run(&c).unwrap();
        let csv = rep.csv_string();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "trials,rolls,threshold,qualifying,empirical_probability,markov,chebyshev,chernoff"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("2.0000000000000000e3,"));
        for cell in row.split(',') {
            let v: f64 = cell.parse().unwrap();
            assert!(v.is_finite());
        }
    }

    #[test]
    fn config_json_round_trips_through_resolution() {
        let text = r#"{ "name": "annulus_violation", "seed": 5, "n": 1000 }"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        let resolved = c.resolve().unwrap();
        assert_eq!(resolved.n, 1000);
        assert_eq!(resolved.dims, vec![200]);
        assert_eq!(resolved.epsilon_grid, vec![1.0, 4.0, 6.0, 8.0, 10.0]);
        let again: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&resolved).unwrap()).unwrap();
        assert_eq!(again, resolved);
    }
}
