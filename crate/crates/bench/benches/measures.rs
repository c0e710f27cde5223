use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use incmeter_bench::corpus;
use incmeter_core::{compute, emit_asp, encode, ComputeOptions, Measure, Method};

fn searches(c: &mut Criterion) {
    let kbs = corpus(3, 10, 7);
    let options = ComputeOptions::default();
    for measure in Measure::ALL {
        let mut group = c.benchmark_group(format!("search/{measure}"));
        group.sample_size(10);
        for method in [Method::SatBinary, Method::SatLinear, Method::MaxSat, Method::Naive] {
            if !method.supports(measure) {
                continue;
            }
            group.bench_function(BenchmarkId::from_parameter(method), |b| {
                b.iter(|| {
                    for kb in &kbs {
                        let _ = black_box(compute(kb, measure, method, &options));
                    }
                })
            });
        }
        group.finish();
    }
}

fn encodings(c: &mut Criterion) {
    let mut group = c.benchmark_group("encode");
    for atoms in [3, 5, 8] {
        let kbs = corpus(atoms, 10, 11);
        for measure in Measure::ALL {
            group.bench_with_input(BenchmarkId::new(measure.to_string(), atoms), &kbs, |b, kbs| {
                b.iter(|| {
                    for kb in kbs {
                        black_box(encode(measure, kb, 2));
                    }
                })
            });
        }
    }
    group.finish();
}

fn asp_emission(c: &mut Criterion) {
    let kbs = corpus(5, 10, 13);
    let mut group = c.benchmark_group("emit-asp");
    for measure in Measure::ALL {
        group.bench_function(BenchmarkId::from_parameter(measure), |b| {
            b.iter(|| {
                for kb in &kbs {
                    black_box(emit_asp(measure, kb).text());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, searches, encodings, asp_emission);
criterion_main!(benches);
