//! Parallel vs sequential scans on the hot oracle loops.
//!
//! `cargo bench -p descent-core` (the parallel arms need the default
//! `parallel` feature).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use descent_core::axioms::{check_monotone, AuditOptions};
use descent_core::critical::check_determination;
use descent_core::exact::{rat, rint};
use descent_core::exec::Executor;
use descent_core::fgrid::FunctionGrid;
use descent_core::ops::OperatorHandle;
use descent_core::samples;

fn executors() -> Vec<(&'static str, Executor)> {
    let mut v = vec![("seq", Executor::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("par", Executor::Parallel));
    v
}

fn bench_determination(c: &mut Criterion) {
    let gen = samples::random_generator(4, &[rint(0), rat(1, 2), rint(1)], 5);
    let op = OperatorHandle::rate_descent(gen.clone());
    let grid = FunctionGrid::integer(gen.space().clone(), 4).unwrap();
    let mut group = c.benchmark_group("determination_4x4");
    for (name, exec) in executors() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| {
                let report = check_determination(&op, &grid, exec).unwrap();
                assert!(report.violations.is_empty());
            })
        });
    }
    group.finish();
}

fn bench_monotonicity_audit(c: &mut Criterion) {
    let gen = samples::random_generator(3, &[rint(0), rint(1)], 8);
    let op = OperatorHandle::rate_descent(gen.clone());
    let grid = FunctionGrid::integer(gen.space().clone(), 3).unwrap();
    let mut group = c.benchmark_group("monotonicity_3x3");
    for (name, exec) in executors() {
        let opts = AuditOptions { exec, ..AuditOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| {
                let report = check_monotone(&op, &grid, opts).unwrap();
                assert!(report.holds_on_grid());
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_determination, bench_monotonicity_audit);
criterion_main!(benches);
