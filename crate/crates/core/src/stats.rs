//! Norms, pairwise kernels, summaries, histograms, and grid convolution.
//!
//! Pairwise outputs follow lexicographic `i < j` order and may be computed
//! in parallel internally; the order contract never changes. Sums use
//! Neumaier compensation so summaries stay stable for the `1e7`-element
//! arrays the experiments produce.

use crate::error::{Error, Result};
use crate::samplers::PointCloud;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Pairwise kernels refuse clouds larger than this; `n^2` memory past it
/// stops being desk-scale.
pub const PAIRWISE_MAX_POINTS: usize = 20_000;

/// Neumaier-compensated sum.
fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{what} contains a non-finite value at index {i}"
        )));
    }
    Ok(())
}

pub fn euclidean_norm(point: &[f64]) -> f64 {
    point.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Euclidean norm of each row.
pub fn norms(cloud: &PointCloud) -> Vec<f64> {
    cloud.rows().map(euclidean_norm).collect()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_pairwise_size(n: usize) -> Result<()> {
    if n > PAIRWISE_MAX_POINTS {
        return Err(Error::ResourceCap(format!(
            "pairwise kernels accept at most {PAIRWISE_MAX_POINTS} points, got {n}"
        )));
    }
    Ok(())
}

/// All `n(n-1)/2` distances `|x_i - x_j|`, `i < j` lexicographic.
pub fn pairwise_distances(cloud: &PointCloud) -> Result<Vec<f64>> {
    let n = cloud.len();
    check_pairwise_size(n)?;
    let per_row: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = cloud.row(i);
            ((i + 1)..n).map(|j| distance(a, cloud.row(j))).collect()
        })
        .collect();
    Ok(per_row.concat())
}

/// All `n(n-1)/2` dot products `<x_i, x_j>`, `i < j` lexicographic.
///
/// With `normalized` the rows are scaled to unit length first; a zero-norm
/// point then has no direction and the input is rejected as degenerate.
pub fn pairwise_dots(cloud: &PointCloud, normalized: bool) -> Result<Vec<f64>> {
    let n = cloud.len();
    check_pairwise_size(n)?;
    let inv_norms: Option<Vec<f64>> = if normalized {
        let mut inv = Vec::with_capacity(n);
        for (i, p) in cloud.rows().enumerate() {
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "point {i} has zero norm and cannot be normalized"
                )));
            }
            inv.push(1.0 / norm);
        }
        Some(inv)
    } else {
        None
    };
    let per_row: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = cloud.row(i);
            ((i + 1)..n)
                .map(|j| {
                    let raw = dot(a, cloud.row(j));
                    match &inv_norms {
                        Some(inv) => raw * inv[i] * inv[j],
                        None => raw,
                    }
                })
                .collect()
        })
        .collect();
    Ok(per_row.concat())
}

/// Count, mean, unbiased variance, min, max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    /// `None` when `count < 2`; the unbiased estimator needs two values.
    pub variance: Option<f64>,
    pub min: f64,
    pub max: f64,
}

/// Two-pass compensated summary of a non-empty slice of finite values.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("summarize needs at least one value".into()));
    }
    check_finite(values, "summarize input")?;
    let n = values.len();
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    let variance = if n >= 2 {
        let m2 = compensated_sum(values.iter().map(|x| (x - mean) * (x - mean)));
        Some(m2 / (n - 1) as f64)
    } else {
        None
    };
    let (mut min, mut max) = (values[0], values[0]);
    for &v in &values[1..] {
        min = min.min(v);
        max = max.max(v);
    }
    Ok(SummaryStats { count: n, mean, variance, min, max })
}

/// Uniform-width histogram with explicit out-of-range counters.
///
/// Bins are left-closed right-open; the last bin also includes the right
/// edge so `hi` itself is counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges, first exactly `lo`, last exactly `hi`.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn total_in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Index of the fullest bin (ties resolve to the leftmost).
    pub fn modal_bin(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }
}

pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "histogram range must satisfy lo < hi with finite edges, got [{lo}, {hi}]"
        )));
    }
    check_finite(values, "histogram input")?;
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    edges[bins] = hi; // keep the last edge exact
    let mut counts = vec![0u64; bins];
    let (mut underflow, mut overflow) = (0u64, 0u64);
    for &v in values {
        if v < lo {
            underflow += 1;
        } else if v > hi {
            overflow += 1;
        } else {
            // v == hi lands past the last bin; fold it back (closed edge).
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
    }
    Ok(Histogram { edges, counts, underflow, overflow })
}

/// A function sampled on a uniform grid: value `i` sits at `x0 + i*dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid needs finite x0 and dx > 0, got x0={x0} dx={dx}"
            )));
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("grid needs at least one value".into()));
        }
        check_finite(&values, "grid values")?;
        if let Some(i) = values.iter().position(|&v| v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "densities are non-negative; value at index {i} is {}",
                values[i]
            )));
        }
        Ok(DensityGrid { x0, dx, values })
    }

    /// Samples `f` on `x0 + i*dx` for `i < len`.
    pub fn from_fn(x0: f64, dx: f64, len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..len).map(|i| f(x0 + i as f64 * dx)).collect();
        DensityGrid::new(x0, dx, values)
    }

    /// Centered `N(0, sigma^2)` density sampled out to `8.5 sigma` on each
    /// side, leaving truncated mass around `1e-17`.
    pub fn gaussian(sigma: f64, dx: f64) -> Result<Self> {
        let pdf = gaussian_density(sigma)?;
        let half = (8.5 * sigma / dx).ceil() as usize;
        DensityGrid::from_fn(-(half as f64) * dx, dx, 2 * half + 1, pdf)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Trapezoid-rule integral; close to 1 for a well-resolved density.
    pub fn mass(&self) -> f64 {
        let inner = compensated_sum(self.values.iter().copied());
        self.dx * (inner - 0.5 * (self.values[0] + self.values[self.values.len() - 1]))
    }

    /// Orders grids deterministically so convolution can pick a canonical
    /// operand order (see `convolve_densities`).
    fn canonical_key(&self) -> (usize, u64, u64) {
        (self.values.len(), self.x0.to_bits(), self.dx.to_bits())
    }
}

/// Discrete convolution `dx * sum_i f[i] g[k-i]` on a shared step size.
///
/// The support grows to `len_f + len_g - 1` points starting at
/// `f.x0 + g.x0`. Operands are ordered by a canonical key before summing so
/// `f * g` and `g * f` produce bit-identical arrays despite floating-point
/// addition being order-sensitive.
pub fn convolve_densities(f: &DensityGrid, g: &DensityGrid) -> Result<DensityGrid> {
    let rel = (f.dx - g.dx).abs();
    if rel > 1e-12 * f.dx.abs() {
        return Err(Error::InvalidArgument(format!(
            "grids must share dx, got {} vs {}",
            f.dx, g.dx
        )));
    }
    let (a, b) = if f.canonical_key() <= g.canonical_key() { (f, g) } else { (g, f) };
    let (na, nb) = (a.values.len(), b.values.len());
    let out_len = na + nb - 1;
    let dx = f.dx;
    let values: Vec<f64> = (0..out_len)
        .into_par_iter()
        .map(|k| {
            let i_lo = k.saturating_sub(nb - 1);
            let i_hi = k.min(na - 1);
            let mut acc = 0.0;
            for i in i_lo..=i_hi {
                acc += a.values[i] * b.values[k - i];
            }
            dx * acc
        })
        .collect();
    DensityGrid::new(f.x0 + g.x0, dx, values)
}

/// The `N(0, sigma^2)` density as a reusable closure.
pub fn gaussian_density(sigma: f64) -> Result<impl Fn(f64) -> f64 + Copy + Send + Sync> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sigma must be finite and > 0, got {sigma}"
        )));
    }
    let inv_norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    Ok(move |x: f64| inv_norm * (-x * x * inv_two_var).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::CloudMeta;

    fn cloud(rows: &[&[f64]]) -> PointCloud {
        let dim = rows[0].len();
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        PointCloud::from_rows(data, rows.len(), dim, CloudMeta::External).unwrap()
    }

    #[test]
    fn norms_are_euclidean() {
        let c = cloud(&[&[3.0, 4.0], &[0.0, 0.0]]);
        assert_eq!(norms(&c), vec![5.0, 0.0]);
    }

    #[test]
    fn distances_in_lexicographic_order() {
        let c = cloud(&[&[0.0, 0.0], &[3.0, 4.0], &[6.0, 8.0]]);
        assert_eq!(pairwise_distances(&c).unwrap(), vec![5.0, 10.0, 5.0]);
    }

    #[test]
    fn pair_count_is_n_choose_2() {
        for n in [2usize, 3, 7, 20] {
            let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
            let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
            let d = pairwise_distances(&cloud(&refs)).unwrap();
            assert_eq!(d.len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn dots_raw_and_normalized() {
        let c = cloud(&[&[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(pairwise_dots(&c, false).unwrap(), vec![1.0]);
        let nd = pairwise_dots(&c, true).unwrap();
        assert!((nd[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalized_dots_reject_zero_points() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 1.0]]);
        assert!(matches!(pairwise_dots(&c, true), Err(Error::DegenerateInput(_))));
        assert!(pairwise_dots(&c, false).is_ok());
    }

    #[test]
    fn summary_basics() {
        let s = summarize(&[0.0, 10.0]).unwrap();
        assert_eq!(s.count, 2);
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.variance, Some(50.0));
        assert_eq!((s.min, s.max), (0.0, 10.0));

        let one = summarize(&[3.0]).unwrap();
        assert_eq!(one.variance, None);
        assert_eq!(one.mean, 3.0);

        assert!(summarize(&[]).is_err());
        assert!(summarize(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn summary_is_shift_stable() {
        // A large offset should not destroy the variance estimate.
        let base = 1e9;
        let values: Vec<f64> = (0..1000).map(|i| base + (i % 10) as f64).collect();
        let s = summarize(&values).unwrap();
        let expected_var = {
            let m = 4.5;
            (0..10).map(|i| (i as f64 - m).powi(2)).sum::<f64>() / 10.0 * (1000.0 / 999.0)
        };
        assert!((s.mean - (base + 4.5)).abs() < 1e-6);
        assert!((s.variance.unwrap() - expected_var).abs() < 1e-6);
    }

    #[test]
    fn histogram_edges_and_closure() {
        let h = histogram(&[0.0, 0.5, 1.0, -0.1, 1.1], 0.0, 1.0, 2).unwrap();
        assert_eq!(h.edges, vec![0.0, 0.5, 1.0]);
        assert_eq!(h.counts, vec![1, 2]); // 1.0 falls in the closed last bin
        assert_eq!((h.underflow, h.overflow), (1, 1));
        assert_eq!(h.total_in_range() + h.underflow + h.overflow, 5);
    }

    #[test]
    fn histogram_rejects_bad_ranges() {
        assert!(histogram(&[1.0], 0.0, 1.0, 0).is_err());
        assert!(histogram(&[1.0], 1.0, 1.0, 3).is_err());
        assert!(histogram(&[1.0], 2.0, 1.0, 3).is_err());
    }

    #[test]
    fn density_closure_matches_constants() {
        let pdf = gaussian_density(1.0).unwrap();
        assert!((pdf(0.0) - 0.3989422804014327).abs() < 1e-16);
        let wide = gaussian_density(2.0).unwrap();
        assert!((wide(0.0) - 0.3989422804014327 / 2.0).abs() < 1e-16);
        assert!(gaussian_density(0.0).is_err());
        assert!(gaussian_density(-1.0).is_err());
    }

    #[test]
    fn gaussian_grid_has_unit_mass() {
        let g = DensityGrid::gaussian(1.0, 0.01).unwrap();
        assert!((g.mass() - 1.0).abs() < 1e-6, "mass {}", g.mass());
    }

    #[test]
    fn convolution_matches_closed_form() {
        // N(0,1) * N(0,1) = N(0,2), density (4 pi)^(-1/2) exp(-s^2/4)
        let g = DensityGrid::gaussian(1.0, 0.01).unwrap();
        let conv = convolve_densities(&g, &g).unwrap();
        let mut sup = 0.0_f64;
        for (i, &v) in conv.values.iter().enumerate() {
            let s = conv.x_at(i);
            let exact = (4.0 * std::f64::consts::PI).sqrt().recip() * (-s * s / 4.0).exp();
            sup = sup.max((v - exact).abs());
        }
        assert!(sup < 1e-4, "sup error {sup}");
    }

    #[test]
    fn convolution_commutes_bitwise() {
        let f = DensityGrid::gaussian(1.0, 0.05).unwrap();
        let g = DensityGrid::gaussian(2.0, 0.05).unwrap();
        let fg = convolve_densities(&f, &g).unwrap();
        let gf = convolve_densities(&g, &f).unwrap();
        assert_eq!(fg, gf);
    }

    #[test]
    fn convolution_is_associative_numerically() {
        let f = DensityGrid::gaussian(1.0, 0.05).unwrap();
        let g = DensityGrid::gaussian(1.5, 0.05).unwrap();
        let h = DensityGrid::gaussian(0.5, 0.05).unwrap();
        let left = convolve_densities(&convolve_densities(&f, &g).unwrap(), &h).unwrap();
        let right = convolve_densities(&f, &convolve_densities(&g, &h).unwrap()).unwrap();
        assert_eq!(left.values.len(), right.values.len());
        assert!((left.x0 - right.x0).abs() < 1e-9);
        let worst = left
            .values
            .iter()
            .zip(&right.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(worst < 1e-10, "associativity gap {worst}");
    }

    #[test]
    fn convolution_rejects_mismatched_dx() {
        let f = DensityGrid::gaussian(1.0, 0.05).unwrap();
        let g = DensityGrid::gaussian(1.0, 0.04).unwrap();
        assert!(convolve_densities(&f, &g).is_err());
    }

    #[test]
    fn pairwise_cap_enforced() {
        let data = vec![0.0; PAIRWISE_MAX_POINTS + 1];
        let c = PointCloud::from_rows(data, PAIRWISE_MAX_POINTS + 1, 1, CloudMeta::External)
            .unwrap();
        assert!(matches!(pairwise_distances(&c), Err(Error::ResourceCap(_))));
    }
}
