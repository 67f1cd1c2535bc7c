use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ea_core::{Budget, HFSet};
use num_bigint::BigUint;

fn kernel(c: &mut Criterion) {
    let budget = Budget::default();
    c.bench_function("from_code 0..4096", |b| {
        b.iter(|| (0..4096u64).map(|n| HFSet::from_code(black_box(n))).count())
    });
    let v4 = (0..4).fold(HFSet::empty(), |s, _| s.power_set(&budget).unwrap());
    c.bench_function("power_set of V4", |b| b.iter(|| black_box(&v4).power_set(&budget).unwrap()));
    let big = HFSet::decode(&(BigUint::from(1u8) << 200u32 | BigUint::from(0xdead_beefu32)));
    c.bench_function("transitive_closure", |b| b.iter(|| black_box(&big).transitive_closure()));
    c.bench_function("encode", |b| {
        b.iter(|| {
            let s = HFSet::decode(black_box(&BigUint::from(123_456_789u64)));
            s.encode().unwrap()
        })
    });
}

criterion_group!(benches, kernel);
criterion_main!(benches);
