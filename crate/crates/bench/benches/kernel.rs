use criterion::{criterion_group, criterion_main, Criterion};
use delta_chow::algelim::{GroebnerBasis, Limits, TermOrder};
use delta_chow::{DerVar, DiffPoly, RingContext};
use delta_chow_bench::chain;

fn reduction(c: &mut Criterion) {
    let a = chain(&["y1"], &["y1*y1'' - 2*y1'^2"]);
    let r = a.ranking().ring().clone();
    let f = DiffPoly::parse(&r, "y1'''^2*y1 + 3*y1''*y1' - y1^3").unwrap();
    c.bench_function("ritt_reduce/order_3", |b| {
        b.iter(|| a.ritt_reduce(&f).unwrap())
    });
    let r2 = RingContext::main_q(&["y1"]);
    let p = DiffPoly::parse(&r2, "y1'^3 + y1*y1' - 1").unwrap();
    c.bench_function("derivative/5", |b| {
        b.iter(|| (0..5).fold(p.clone(), |q, _| q.derivative()))
    });
}

fn groebner(c: &mut Criterion) {
    let r = RingContext::main_q(&["x", "y", "z"]);
    let polys: Vec<DiffPoly> = ["x^2 + y*z - 2", "y^2 - x*z + 1", "z^2 + x*y - 3"]
        .iter()
        .map(|s| DiffPoly::parse(&r, s).unwrap())
        .collect();
    let vars: Vec<DerVar> = (0..3).map(|i| DerVar::new(i, 0)).collect();
    c.bench_function("groebner/lex_3x3", |b| {
        b.iter(|| GroebnerBasis::compute(&polys, &vars, TermOrder::Lex, Limits::default()).unwrap())
    });
}

criterion_group!(benches, reduction, groebner);
criterion_main!(benches);
