//! Trial fan-out: the rayon path against the sequential path on the same
//! independent functional evaluations.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hodge_wres::curvature::{sample_curvature, OneFormJet};
use hodge_wres::functionals::{closedness, metric_functional, random_closedness_operator, DiracContext};
use hodge_wres::parallel::{map_trials, map_trials_sequential, trial_seed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 8;

fn trial(n: usize, i: usize) -> bool {
    let seed = trial_seed(1, "bench", i);
    let ctx = DiracContext::new(sample_curvature(n, seed, 2).unwrap(), Some(seed)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = OneFormJet::random(n, &mut rng, true);
    let w = OneFormJet::random(n, &mut rng, true);
    let t = random_closedness_operator(&ctx, &mut rng).unwrap();
    metric_functional(&ctx, &u, &w).unwrap().matched && closedness(&ctx, &t).unwrap().matched
}

fn fan_out(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    let n = 4;
    group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
        b.iter(|| black_box(map_trials_sequential(TRIALS, |i| trial(n, i))))
    });
    let label = if hodge_wres::parallel::is_parallel() { "rayon" } else { "default (sequential build)" };
    group.bench_with_input(BenchmarkId::new(label, n), &n, |b, &n| {
        b.iter(|| black_box(map_trials(TRIALS, |i| trial(n, i))))
    });
    group.finish();
}

criterion_group!(benches, fan_out);
criterion_main!(benches);
