use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ea_core::systems::{ack0_successor, Phi, StagePlan};
use ea_core::{run_suite, Budget, HFSet, System};
use num_bigint::BigUint;

fn systems(c: &mut Criterion) {
    let budget = Budget::default();
    for spec in ["vn", "z", "ack", "base:vn:2", "ackphi:double:1"] {
        let sys = System::parse(spec, &budget).unwrap();
        c.bench_function(&format!("enumerate {spec} 20"), |b| b.iter(|| sys.enumerate(black_box(20), &budget).unwrap()));
    }
    c.bench_function("stage plan double:1", |b| {
        b.iter(|| {
            let plan = StagePlan::new(Phi::Double, 1, &budget).unwrap();
            (1..4).map(|m| plan.stage(m).unwrap()).count()
        })
    });
    c.bench_function("ackphi successor", |b| {
        let plan = StagePlan::new(Phi::Double, 1, &budget).unwrap();
        b.iter(|| plan.successor(black_box(&BigUint::from(17u32))).unwrap())
    });
    c.bench_function("ack0 successor", |b| {
        let s = HFSet::from_code(1000);
        b.iter(|| ack0_successor(black_box(&s)))
    });
    let small = Budget::parse("codes=8,samples=200,envs=10").unwrap();
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for suite in ["lex-ack", "numeral-base"] {
        group.bench_function(suite, |b| b.iter(|| run_suite(suite, &small).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, systems);
criterion_main!(benches);
