//! Sequential against rayon batch execution of independent solver problems.
//!
//! `cargo bench -p carlitz-core` runs both; with `--no-default-features`
//! only the sequential side is built.

use carlitz_core::sample::{self, SeriesShape};
use carlitz_core::{batch, CompSeries, Ctx, PerfExp};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BATCH: usize = 32;

fn solvers(c: &mut Criterion) {
    let ctx = Ctx::for_q(3, 1, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let odes: Vec<_> = (0..BATCH).map(|_| sample::ode_problem(&ctx, &mut rng, 2, 3)).collect();
    let riccatis: Vec<_> = (0..BATCH).map(|_| sample::riccati_problem(&ctx, &mut rng, 4)).collect();
    let xprec = PerfExp::int(6);

    let mut g = c.benchmark_group("solve_ode_n12");
    g.sample_size(10);
    let solve = |p: &_| ctx.solve_ode(p, 12).unwrap();
    g.bench_function(BenchmarkId::new("seq", BATCH), |b| b.iter(|| batch::map_seq(&odes, solve)));
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("par", BATCH), |b| b.iter(|| batch::map_par(&odes, solve)));
    g.finish();

    let mut g = c.benchmark_group("solve_riccati_n10");
    g.sample_size(10);
    let solve = |p: &_| ctx.solve_riccati(p, 10, &xprec).unwrap();
    g.bench_function(BenchmarkId::new("seq", BATCH), |b| b.iter(|| batch::map_seq(&riccatis, solve)));
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("par", BATCH), |b| b.iter(|| batch::map_par(&riccatis, solve)));
    g.finish();
}

fn composition(c: &mut Criterion) {
    let ctx = Ctx::for_q(2, 2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shape = SeriesShape { min_val: 0, spread: 4, terms: 4, den_exp: 1 };
    let pairs: Vec<(CompSeries, CompSeries)> = (0..BATCH * 4)
        .map(|_| {
            let a = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 0, 8, 0.8, shape), 8);
            let b = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 0, 8, 0.8, shape), 8);
            (a, b)
        })
        .collect();
    let mut g = c.benchmark_group("compose_n8");
    let compose = |(a, b): &(CompSeries, CompSeries)| ctx.cs_compose(a, b).unwrap();
    g.bench_function(BenchmarkId::new("seq", pairs.len()), |b| b.iter(|| batch::map_seq(&pairs, compose)));
    #[cfg(feature = "parallel")]
    g.bench_function(BenchmarkId::new("par", pairs.len()), |b| b.iter(|| batch::map_par(&pairs, compose)));
    g.finish();
}

criterion_group!(benches, solvers, composition);
criterion_main!(benches);
