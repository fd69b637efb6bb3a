//! Seeded samplers for the three reference distributions.
//!
//! * `GaussianSpherical`: coordinates are independent `N(0, sigma^2)`.
//! * `BallUniform`: uniform on the unit ball, drawn as a normalized Gaussian
//!   direction scaled by `U^(1/d)` so the radial CDF is `r^d`.
//! * `HypercubeUniform`: coordinates are independent uniforms on `[-1, 1]`,
//!   which is exactly the uniform measure on the cube (product measure).
//!
//! A cloud is a pure function of `(spec, n, seed)`. Points are drawn from a
//! single SplitMix64 stream in row order; callers that replicate or shard
//! work derive child seeds instead of splitting a stream mid-way.

use crate::error::{Error, Result};
use crate::seed::{RandomSeed, SplitMix64};
use serde::{Deserialize, Serialize};

/// Which reference distribution a spec draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    #[serde(rename = "gaussian")]
    GaussianSpherical,
    #[serde(rename = "ball")]
    BallUniform,
    #[serde(rename = "cube")]
    HypercubeUniform,
}

impl DistKind {
    pub fn token(self) -> &'static str {
        match self {
            DistKind::GaussianSpherical => "gaussian",
            DistKind::BallUniform => "ball",
            DistKind::HypercubeUniform => "cube",
        }
    }
}

/// A validated (kind, dimension, sigma) triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistKind,
    pub dimension: usize,
    /// Coordinate standard deviation; meaningful for the Gaussian only and
    /// fixed at 1 for the other kinds.
    pub sigma: f64,
}

impl DistributionSpec {
    pub fn gaussian(dimension: usize, sigma: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sigma must be finite and > 0, got {sigma}"
            )));
        }
        Ok(DistributionSpec { kind: DistKind::GaussianSpherical, dimension, sigma })
    }

    pub fn ball(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(DistributionSpec { kind: DistKind::BallUniform, dimension, sigma: 1.0 })
    }

    pub fn cube(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(DistributionSpec { kind: DistKind::HypercubeUniform, dimension, sigma: 1.0 })
    }

    /// Streaming point source; draws match [`sample`] row for row.
    pub fn stream(&self, seed: RandomSeed) -> PointStream {
        PointStream { spec: *self, rng: seed.rng() }
    }
}

/// Provenance of a point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum CloudMeta {
    /// Drawn by [`sample`] from a spec and seed.
    Sampled { spec: DistributionSpec, seed: RandomSeed },
    /// Image of another cloud under a random projection; `seed` is the
    /// projection's seed when it was drawn rather than supplied as a fixture.
    Projected { seed: Option<RandomSeed>, k: usize },
    /// Loaded from disk or built directly in code.
    External,
}

/// An `n x d` row-major matrix of finite coordinates plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    n: usize,
    dim: usize,
    pub meta: CloudMeta,
}

impl PointCloud {
    /// Wraps an existing row-major buffer, checking shape and finiteness.
    pub fn from_rows(data: Vec<f64>, n: usize, dim: usize, meta: CloudMeta) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if data.len() != n * dim {
            return Err(Error::InvalidArgument(format!(
                "buffer holds {} values, expected n*d = {}",
                data.len(),
                n * dim
            )));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate at flat index {bad}"
            )));
        }
        Ok(PointCloud { data, n, dim, meta })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Row-at-a-time generator; memory stays `O(d)` no matter how many points
/// are drawn. `sample` is this plus collection.
pub struct PointStream {
    spec: DistributionSpec,
    rng: SplitMix64,
}

impl PointStream {
    /// Fills `out` (length `d`) with the next point.
    pub fn fill_next(&mut self, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.spec.dimension);
        match self.spec.kind {
            DistKind::GaussianSpherical => {
                for x in out.iter_mut() {
                    *x = self.spec.sigma * self.rng.next_normal();
                }
            }
            DistKind::HypercubeUniform => {
                for x in out.iter_mut() {
                    *x = 2.0 * self.rng.next_f64() - 1.0;
                }
            }
            DistKind::BallUniform => {
                // Direction from a normalized Gaussian (resampled in the
                // measure-zero event of a zero vector), radius U^(1/d).
                let d = out.len();
                let norm = loop {
                    let mut sq = 0.0;
                    for x in out.iter_mut() {
                        *x = self.rng.next_normal();
                        sq += *x * *x;
                    }
                    if sq > 0.0 {
                        break sq.sqrt();
                    }
                };
                let radius = self.rng.next_f64().powf(1.0 / d as f64);
                let scale = radius / norm;
                for x in out.iter_mut() {
                    *x *= scale;
                }
            }
        }
    }
}

/// Draws `n` points. Same `(spec, n, seed)` gives a bit-identical cloud.
pub fn sample(spec: &DistributionSpec, n: usize, seed: RandomSeed) -> Result<PointCloud> {
    let d = spec.dimension;
    let mut stream = spec.stream(seed);
    let mut data = vec![0.0; n * d];
    for row in data.chunks_exact_mut(d) {
        stream.fill_next(row);
    }
    Ok(PointCloud { data, n, dim: d, meta: CloudMeta::Sampled { spec: *spec, seed } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(DistributionSpec::gaussian(0, 1.0).is_err());
        assert!(DistributionSpec::gaussian(3, 0.0).is_err());
        assert!(DistributionSpec::gaussian(3, f64::NAN).is_err());
        assert!(DistributionSpec::ball(0).is_err());
        assert!(DistributionSpec::cube(0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        for spec in [
            DistributionSpec::gaussian(7, 2.0).unwrap(),
            DistributionSpec::ball(7).unwrap(),
            DistributionSpec::cube(7).unwrap(),
        ] {
            let a = sample(&spec, 50, RandomSeed(99)).unwrap();
            let b = sample(&spec, 50, RandomSeed(99)).unwrap();
            assert_eq!(a.data(), b.data());
            let c = sample(&spec, 50, RandomSeed(100)).unwrap();
            assert_ne!(a.data(), c.data());
        }
    }

    #[test]
    fn stream_matches_sample() {
        let spec = DistributionSpec::ball(5).unwrap();
        let cloud = sample(&spec, 20, RandomSeed(3)).unwrap();
        let mut stream = spec.stream(RandomSeed(3));
        let mut row = vec![0.0; 5];
        for i in 0..20 {
            stream.fill_next(&mut row);
            assert_eq!(cloud.row(i), &row[..]);
        }
    }

    #[test]
    fn ball_points_stay_inside() {
        for d in [1, 2, 3, 10, 50] {
            let spec = DistributionSpec::ball(d).unwrap();
            let cloud = sample(&spec, 500, RandomSeed(d as u64)).unwrap();
            for p in cloud.rows() {
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(norm <= 1.0 + 1e-12, "d={d} norm={norm}");
            }
        }
    }

    /// In the plane, half the radius encloses a quarter of the area.
    #[test]
    fn ball_2d_inner_disc_mass() {
        let spec = DistributionSpec::ball(2).unwrap();
        let cloud = sample(&spec, 100_000, RandomSeed(11)).unwrap();
        let inside = cloud
            .rows()
            .filter(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt() <= 0.5)
            .count();
        let frac = inside as f64 / 100_000.0;
        // 3 sigma of a Bernoulli(0.25) mean over 1e5 draws
        let slack = 3.0 * (0.25_f64 * 0.75 / 100_000.0).sqrt();
        assert!((frac - 0.25).abs() <= slack, "frac {frac}");
    }

    /// Empirical radial CDF vs r^d, gated by the DKW band at level 1e-3.
    #[test]
    fn ball_radial_cdf() {
        let (d, n) = (3usize, 20_000usize);
        let spec = DistributionSpec::ball(d).unwrap();
        let cloud = sample(&spec, n, RandomSeed(17)).unwrap();
        let mut radii: Vec<f64> = cloud
            .rows()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        radii.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        // ln(2/alpha) = ln(2000)
        let band = (2000.0_f64.ln() / (2.0 * n as f64)).sqrt();
        let mut worst = 0.0_f64;
        for (i, r) in radii.iter().enumerate() {
            let cdf = r.powi(d as i32);
            worst = worst.max((i as f64 / n as f64 - cdf).abs());
            worst = worst.max(((i + 1) as f64 / n as f64 - cdf).abs());
        }
        assert!(worst <= band, "KS statistic {worst} exceeds DKW band {band}");
    }

    #[test]
    fn gaussian_second_moment() {
        let spec = DistributionSpec::gaussian(1, 1.0).unwrap();
        let cloud = sample(&spec, 1_000_000, RandomSeed(4)).unwrap();
        let m2 = cloud.data().iter().map(|x| x * x).sum::<f64>() / 1e6;
        // Var(X^2) = 2, so 3 sigma of the estimate is 3*sqrt(2/n)
        assert!((m2 - 1.0).abs() <= 3.0 * (2.0_f64 / 1e6).sqrt(), "m2 {m2}");
    }

    #[test]
    fn gaussian_respects_sigma() {
        let spec = DistributionSpec::gaussian(2, 3.0).unwrap();
        let cloud = sample(&spec, 200_000, RandomSeed(8)).unwrap();
        let m2 = cloud.data().iter().map(|x| x * x).sum::<f64>() / 400_000.0;
        assert!((m2 - 9.0).abs() < 0.1, "m2 {m2}");
    }

    #[test]
    fn cube_range_and_mean() {
        let spec = DistributionSpec::cube(3).unwrap();
        let cloud = sample(&spec, 100_000, RandomSeed(2)).unwrap();
        let mut sum = 0.0;
        for v in cloud.data() {
            assert!((-1.0..=1.0).contains(v));
            sum += v;
        }
        let mean = sum / 300_000.0;
        // sd of U[-1,1] is 1/sqrt(3); 4 sigma gate on the grand mean
        assert!(mean.abs() <= 4.0 / (3.0_f64 * 300_000.0).sqrt(), "mean {mean}");
    }

    #[test]
    fn from_rows_validates() {
        assert!(PointCloud::from_rows(vec![1.0, 2.0], 1, 2, CloudMeta::External).is_ok());
        assert!(PointCloud::from_rows(vec![1.0, 2.0, 3.0], 1, 2, CloudMeta::External).is_err());
        assert!(PointCloud::from_rows(vec![1.0, f64::NAN], 1, 2, CloudMeta::External).is_err());
        assert!(PointCloud::from_rows(vec![], 0, 0, CloudMeta::External).is_err());
    }
}
