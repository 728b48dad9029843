use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ckrep::lift::TruncatedLift;
use ckrep::module::{generated_algebra_dimension, random_module, PythagoreanModule};
use ckrep::quantum::{lens_graph_coprime_with, sphere_odd_graph, AdmissibilityRule, LensParams};
use ckrep::Exec;

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn modules() -> Vec<PythagoreanModule> {
    let g = Arc::new(sphere_odd_graph(4));
    (0..4)
        .map(|seed| random_module(g.clone(), &[2, 2, 1, 2], seed).unwrap())
        .collect()
}

fn lift_and_check(c: &mut Criterion) {
    let batch = modules();
    let mut group = c.benchmark_group("lift_and_check");
    group.sample_size(10);
    for level in [2, 4] {
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, level), &level, |b, &level| {
                b.iter(|| {
                    for m in &batch {
                        let t = TruncatedLift::new(m, level, exec).unwrap();
                        black_box(t.ck_residuals_with(exec));
                    }
                })
            });
        }
    }
    group.finish();
}

fn lens_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("lens_graph");
    for (n, p, weights) in [(3, 7, vec![1, 2, 3]), (4, 5, vec![1, 2, 3, 4])] {
        let params = LensParams::new(n, p, weights).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("n{n}p{p}")),
                &params,
                |b, params| {
                    b.iter(|| {
                        black_box(
                            lens_graph_coprime_with(params, AdmissibilityRule::NoRevisit, exec)
                                .unwrap(),
                        )
                    })
                },
            );
        }
    }
    group.finish();
}

fn burnside_closure(c: &mut Criterion) {
    let g = Arc::new(
        ckrep::graph::Graph::from_labels(&["1"], &[("a", "1", "1"), ("b", "1", "1")]).unwrap(),
    );
    let m = random_module(g, &[6], 1).unwrap();
    let gens = m.generators();
    let d = m.total_dim();
    let mut group = c.benchmark_group("burnside_closure");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(generated_algebra_dimension(&gens, d, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, lift_and_check, lens_enumeration, burnside_closure);
criterion_main!(benches);
