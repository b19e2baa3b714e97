use bornlab::effects::{default_witnesses, distinguishability_lp, effect_extrema_over_orbit};
use bornlab::symtensor::crosscheck_random;
use bornlab::Effect;
use bornlab_bench::{antipodal_rays, qubit_theory};
use criterion::{criterion_group, criterion_main, Criterion};

fn extrema(c: &mut Criterion) {
    let t = qubit_theory(3);
    let effect = Effect::new(t.reference().clone(), 0.0);
    c.bench_function("effect extrema j=3", |b| b.iter(|| effect_extrema_over_orbit(&t, &effect).unwrap()));
}

fn lp(c: &mut Criterion) {
    let t = qubit_theory(3);
    let w = default_witnesses(&t, 1).unwrap();
    let (a, b) = antipodal_rays();
    let states = [t.omega(&a).unwrap(), t.omega(&b).unwrap()];
    let mut group = c.benchmark_group("lp");
    group.sample_size(10);
    group.bench_function("antipodal pair j=3", |bch| bch.iter(|| distinguishability_lp(&t, &states, &w).unwrap()));
    group.finish();
}

fn tensor(c: &mut Criterion) {
    let t = qubit_theory(3);
    c.bench_function("crosscheck 100 pairs j=3", |b| b.iter(|| crosscheck_random(&t, 100, 1).unwrap()));
}

criterion_group!(benches, extrema, lp, tensor);
criterion_main!(benches);
