use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use fvrecon::experiments::{preset, SchemeSpec};
use fvrecon::solver::{fill_ghosts, Operator};
use fvrecon::{LimiterScheme, SlopePair};

fn slope_grid() -> Vec<SlopePair> {
    (0..64)
        .flat_map(|i| {
            (0..64).map(move |j| SlopePair::new(-2.0 + i as f64 / 16.0, -2.0 + j as f64 / 16.0))
        })
        .collect()
}

fn bench_h(c: &mut Criterion) {
    let dx = 1.0 / 200.0;
    let cfg = preset("smooth-bump").unwrap();
    let slopes = slope_grid();
    let mut group = c.benchmark_group("h");
    for name in ["h3", "ct", "as:q=1.4", "h3l", "h3l-c", "weno-js", "weno-yc"] {
        let spec: SchemeSpec = name.parse().unwrap();
        let scheme: LimiterScheme = spec
            .resolve(dx, cfg.alpha, cfg.yc_epsilon, cfg.switch)
            .unwrap();
        group.bench_function(name, |b| {
            b.iter(|| slopes.iter().map(|&s| scheme.h(black_box(s))).sum::<f64>())
        });
    }
    group.finish();
}

fn bench_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs");
    for (preset_name, n) in [("smooth-bump", 1000), ("shu-osher", 1280)] {
        let cfg = preset(preset_name).unwrap().with_n(n);
        let disc = cfg.discretization().unwrap();
        let mut field = cfg.initial_field().unwrap();
        fill_ghosts(&mut field, &disc.bc).unwrap();
        let mut op = Operator::new(disc);
        let mut out = vec![0.0; field.ncomp() * n];
        group.bench_function(format!("{preset_name}/{n}"), |b| {
            b.iter_batched_ref(
                || field.clone(),
                |f| op.apply(f, &mut out).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_h, bench_operator);
criterion_main!(benches);
