//! Monte-Carlo samplers and closed-form bounds for high-dimensional geometry.
//!
//! The crate groups six concerns:
//!
//! * [`samplers`]: seeded point clouds from the unit ball, the spherical
//!   Gaussian, and the centered hypercube, with splittable substreams.
//! * [`stats`]: norms, pairwise kernels, summaries, histograms, and density
//!   convolution on uniform grids.
//! * [`geometry`]: exact volume and concentration formulas for the unit ball
//!   and the hypercube.
//! * [`tailbounds`]: Markov, Chebyshev, Chernoff, Bernstein, and annulus-style
//!   tail estimates, each returned as an unclamped [`BoundResult`].
//! * [`projection`]: Gaussian random projections, the dimension rule
//!   `k = ceil(48 ln n / eps^2)`, and distortion measurement.
//! * [`experiments`]: named, seeded runs that regenerate the reference tables
//!   and curves as machine-readable reports.
//!
//! Everything downstream of a [`seed::RandomSeed`] is deterministic: the same
//! resolved configuration produces bit-identical output on the same build.

pub mod bound;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod projection;
pub mod samplers;
pub mod seed;
pub mod stats;
pub mod tailbounds;

pub use bound::BoundResult;
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentReport};
pub use projection::{DistortionReport, RandomProjection};
pub use samplers::{DistKind, DistributionSpec, PointCloud};
pub use seed::RandomSeed;
pub use stats::{DensityGrid, Histogram, SummaryStats};
