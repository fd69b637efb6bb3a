//! Gaussian random projections and distortion measurement.
//!
//! A projection is a `k x d` matrix of i.i.d. standard normals; application
//! folds in the `1/sqrt(k)` factor when `scaled` is set (the default from
//! [`make_projection`]), so projected distances estimate original distances
//! directly. The dimension rule `k = ceil(48 ln n / eps^2)` guarantees all
//! pairwise distances of `n` points survive within `1 +- eps` with
//! probability at least `1 - 1/n`.

use crate::bound::BoundResult;
use crate::error::{Error, Result};
use crate::samplers::{CloudMeta, PointCloud};
use crate::seed::RandomSeed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A dense `k x d` projection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomProjection {
    matrix: Vec<f64>, // row-major, k rows of length d
    d: usize,
    k: usize,
    /// Seed the matrix was drawn from; `None` for fixture matrices.
    pub seed: Option<RandomSeed>,
    /// Whether application multiplies by `1/sqrt(k)`.
    pub scaled: bool,
}

impl RandomProjection {
    /// Draws a fresh matrix of `k * d` i.i.d. `N(0, 1)` entries, row major,
    /// with scaling enabled.
    pub fn draw(d: usize, k: usize, seed: RandomSeed) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "need d >= 1 and k >= 1, got d={d} k={k}"
            )));
        }
        if k > d {
            return Err(Error::InvalidArgument(format!(
                "projection must not raise dimension: k={k} > d={d}"
            )));
        }
        let mut rng = seed.rng();
        let matrix = (0..k * d).map(|_| rng.next_normal()).collect();
        Ok(RandomProjection { matrix, d, k, seed: Some(seed), scaled: true })
    }

    /// Wraps an explicit matrix (tests, persistence).
    pub fn from_rows(matrix: Vec<f64>, k: usize, d: usize, scaled: bool) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "need d >= 1 and k >= 1, got d={d} k={k}"
            )));
        }
        if matrix.len() != k * d {
            return Err(Error::InvalidArgument(format!(
                "matrix holds {} values, expected k*d = {}",
                matrix.len(),
                k * d
            )));
        }
        if let Some(i) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite matrix entry at flat index {i}"
            )));
        }
        Ok(RandomProjection { matrix, k, d, seed: None, scaled })
    }

    pub fn dim_in(&self) -> usize {
        self.d
    }

    pub fn dim_out(&self) -> usize {
        self.k
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.matrix[r * self.d..(r + 1) * self.d]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Applies the projection to one point.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.d);
        debug_assert_eq!(out.len(), self.k);
        let scale = if self.scaled { 1.0 / (self.k as f64).sqrt() } else { 1.0 };
        for (r, slot) in out.iter_mut().enumerate() {
            let row = self.row(r);
            let dot: f64 = row.iter().zip(x).map(|(m, v)| m * v).sum();
            *slot = scale * dot;
        }
    }
}

/// Convenience wrapper matching the drawing contract of [`RandomProjection::draw`].
pub fn make_projection(d: usize, k: usize, seed: RandomSeed) -> Result<RandomProjection> {
    RandomProjection::draw(d, k, seed)
}

/// Projects every row of `cloud`; the output cloud lives in `R^k`.
pub fn project(proj: &RandomProjection, cloud: &PointCloud) -> Result<PointCloud> {
    if cloud.dim() != proj.d {
        return Err(Error::InvalidArgument(format!(
            "cloud dimension {} does not match projection input dimension {}",
            cloud.dim(),
            proj.d
        )));
    }
    let n = cloud.len();
    let k = proj.k;
    let mut data = vec![0.0; n * k];
    data.par_chunks_exact_mut(k)
        .enumerate()
        .for_each(|(i, out)| proj.apply(cloud.row(i), out));
    PointCloud::from_rows(data, n, k, CloudMeta::Projected { seed: proj.seed, k })
}

/// Smallest target dimension at which the distance-preservation guarantee
/// holds: `ceil(48 ln n / eps^2)`.
pub fn jl_dimension(n: usize, epsilon: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok((48.0 * (n as f64).ln() / (epsilon * epsilon)).ceil() as usize)
}

/// Single-vector norm preservation:
/// `P[ | |Tx| - |x| | >= eps |x| ] <= 2 exp(-k eps^2 / 16)`.
pub fn rp_bound(epsilon: f64, k: usize) -> Result<BoundResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let value = 2.0 * (-(k as f64) * epsilon * epsilon / 16.0).exp();
    Ok(BoundResult::new("rp")
        .input("epsilon", epsilon)
        .input("k", k as f64)
        .value(value)
        .valid(value < 1.0)
        .note("P[projected norm off by a factor beyond 1 +- eps]"))
}

/// Success probability of the full distance-preservation statement at the
/// dimension from [`jl_dimension`]: at least `1 - 1/n` over the draw of the
/// projection.
pub fn jl_guarantee(n: usize, epsilon: f64) -> Result<BoundResult> {
    let k = jl_dimension(n, epsilon)?;
    let value = 1.0 - 1.0 / n as f64;
    Ok(BoundResult::new("jl_guarantee")
        .input("n", n as f64)
        .input("epsilon", epsilon)
        .input("k", k as f64)
        .value(value)
        .valid(true)
        .note("P[every pairwise distance preserved within 1 +- eps at k = ceil(48 ln n / eps^2)]"))
}

/// Worst-case multiplicative distance distortion between two aligned clouds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub schema: u32,
    /// Points per cloud.
    pub n: usize,
    /// Original dimension.
    pub d: usize,
    /// Projected dimension.
    pub k: usize,
    /// `max(1 - ratio_min, ratio_max - 1)`.
    pub epsilon_observed: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub pairs_evaluated: usize,
    /// Pairs with coincident originals; they have no ratio and are skipped.
    pub pairs_skipped_zero: usize,
}

/// Compares `|proj_i - proj_j| / |orig_i - orig_j|` over all `i < j`.
///
/// The projected cloud is taken as already scaled (the [`project`] output),
/// so a perfect projection yields ratios of exactly 1.
pub fn max_distortion(original: &PointCloud, projected: &PointCloud) -> Result<DistortionReport> {
    if original.len() != projected.len() {
        return Err(Error::InvalidArgument(format!(
            "clouds must align: {} vs {} points",
            original.len(),
            projected.len()
        )));
    }
    let n = original.len();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "distortion needs at least 2 points, got {n}"
        )));
    }
    let dist = |cloud: &PointCloud, i: usize, j: usize| -> f64 {
        cloud
            .row(i)
            .iter()
            .zip(cloud.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = f64::NEG_INFINITY;
    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let orig = dist(original, i, j);
            if orig == 0.0 {
                skipped += 1;
                continue;
            }
            let ratio = dist(projected, i, j) / orig;
            ratio_min = ratio_min.min(ratio);
            ratio_max = ratio_max.max(ratio);
            evaluated += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::DegenerateInput(
            "every pair of original points coincides; no ratios to measure".into(),
        ));
    }
    Ok(DistortionReport {
        schema: 1,
        n,
        d: original.dim(),
        k: projected.dim(),
        epsilon_observed: (1.0 - ratio_min).max(ratio_max - 1.0),
        ratio_min,
        ratio_max,
        pairs_evaluated: evaluated,
        pairs_skipped_zero: skipped,
    })
}
