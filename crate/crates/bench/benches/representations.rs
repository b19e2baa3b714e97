use bornlab::gpt::OrbitGrid;
use bornlab::irreps::{realize, IrrepSpec};
use bornlab::phenomenology::find_g_extrema;
use bornlab_bench::{qubit_theory, theory};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn realization(c: &mut Criterion) {
    c.bench_function("realize d=2 j=7", |b| b.iter(|| realize(black_box(IrrepSpec { d: 2, j: 7 })).unwrap()));
    c.bench_function("realize d=3 j=2", |b| b.iter(|| realize(black_box(IrrepSpec { d: 3, j: 2 })).unwrap()));
}

fn orbits(c: &mut Criterion) {
    let t3 = qubit_theory(3);
    c.bench_function("orbit grid 64x64 j=3", |b| b.iter(|| t3.orbit_sample(OrbitGrid::Angles { ns: 64, nt: 64 }).unwrap()));
    let q = theory(3, &[2]);
    c.bench_function("orbit haar 500 d=3 j=2", |b| b.iter(|| q.orbit_sample(OrbitGrid::Haar { samples: 500, seed: 1 }).unwrap()));
}

fn g_profile(c: &mut Criterion) {
    c.bench_function("g extrema j=7", |b| b.iter(|| find_g_extrema(black_box(7)).unwrap()));
}

criterion_group!(benches, realization, orbits, g_profile);
criterion_main!(benches);
