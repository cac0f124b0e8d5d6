use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cvnn_bench::{shallow, targets, unit_inputs};
use cvnn_core::{ArchKind, Meter, Network, TrainConfig};

const P: usize = 6;
const R: usize = 3;
const N: usize = 64;

fn infer(c: &mut Criterion) {
    let mut group = c.benchmark_group("infer");
    let x = unit_inputs(P);
    for arch in ArchKind::ALL {
        let net = Network::build(shallow(arch, P, R, N), 1).unwrap();
        group.bench_function(BenchmarkId::from_parameter(arch.slug()), |b| {
            let mut meter = Meter::new();
            b.iter(|| net.infer(black_box(&x), &mut meter).unwrap())
        });
    }
    group.finish();
}

fn train_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("train_step");
    let (x, d) = (unit_inputs(P), targets(R));
    let cfg = TrainConfig::uniform(0.01);
    for arch in ArchKind::ALL {
        let mut net = Network::build(shallow(arch, P, R, N), 1).unwrap();
        group.bench_function(BenchmarkId::from_parameter(arch.slug()), |b| {
            let mut meter = Meter::new();
            b.iter(|| {
                net.train_step(black_box(&x), black_box(&d), &cfg, &mut meter)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, infer, train_step);
criterion_main!(benches);
