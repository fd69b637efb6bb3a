//! Hot paths: sampling throughput, pairwise kernels, projection, and grid
//! convolution. Sizes are chosen so a full run stays under a minute while
//! still exercising the parallel splits.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use highdim::projection::{make_projection, project};
use highdim::samplers::{sample, DistributionSpec};
use highdim::seed::RandomSeed;
use highdim::stats::{convolve_densities, pairwise_distances, DensityGrid};

fn bench_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    for d in [100usize, 10_000] {
        g.throughput(Throughput::Elements(d as u64 * 100));
        let gaussian = DistributionSpec::gaussian(d, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("gaussian", d), &gaussian, |b, spec| {
            b.iter(|| sample(spec, 100, RandomSeed(7)).unwrap())
        });
        let ball = DistributionSpec::ball(d).unwrap();
        g.bench_with_input(BenchmarkId::new("ball", d), &ball, |b, spec| {
            b.iter(|| sample(spec, 100, RandomSeed(7)).unwrap())
        });
    }
    g.finish();
}

fn bench_pairwise(c: &mut Criterion) {
    let spec = DistributionSpec::gaussian(100, 1.0).unwrap();
    let cloud = sample(&spec, 500, RandomSeed(3)).unwrap();
    let mut g = c.benchmark_group("pairwise");
    g.throughput(Throughput::Elements((500 * 499 / 2) as u64));
    g.bench_function("distances_n500_d100", |b| {
        b.iter(|| pairwise_distances(&cloud).unwrap())
    });
    g.finish();
}

fn bench_projection(c: &mut Criterion) {
    let spec = DistributionSpec::gaussian(1_000, 1.0).unwrap();
    let cloud = sample(&spec, 200, RandomSeed(5)).unwrap();
    let proj = make_projection(1_000, 100, RandomSeed(6)).unwrap();
    let mut g = c.benchmark_group("projection");
    g.throughput(Throughput::Elements(200));
    g.bench_function("apply_d1000_k100_n200", |b| {
        b.iter(|| project(&proj, &cloud).unwrap())
    });
    g.finish();
}

fn bench_convolution(c: &mut Criterion) {
    let f = DensityGrid::gaussian(1.0, 0.01).unwrap();
    let g2 = f.clone();
    let mut g = c.benchmark_group("convolution");
    g.throughput(Throughput::Elements(f.values.len() as u64));
    g.bench_function("normal_self_dx_0p01", |b| {
        b.iter(|| convolve_densities(&f, &g2).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_sampling, bench_pairwise, bench_projection, bench_convolution);
criterion_main!(benches);
