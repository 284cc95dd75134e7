//! Sequential versus rayon execution of the heavier loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use canontl::hecke::HeckeAlgebra;
use canontl::par::Mode;
use canontl::verify::Verifier;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn kl_family(c: &mut Criterion) {
    let mut group = c.benchmark_group("kl_family_s5");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| HeckeAlgebra::new(5).kl_family(mode).unwrap().len())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new("triple_n7", name), |b| {
            let v = Verifier::new(mode);
            b.iter(|| black_box(v.triple(7)))
        });
        group.bench_function(BenchmarkId::new("duality_n6", name), |b| {
            // canonical elements are cached after the first pass, so this
            // measures the dual canonical side and the pairing matrix
            let v = Verifier::new(mode);
            b.iter(|| black_box(v.duality(6).unwrap()))
        });
        group.bench_function(BenchmarkId::new("axiom_n4", name), |b| {
            let v = Verifier::new(mode);
            b.iter(|| black_box(v.axiom(4).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, kl_family, suites);
criterion_main!(benches);
