use criterion::{criterion_group, criterion_main, Criterion};
use qmf_core::brackets::rc_bracket;
use qmf_core::forms::{decompose, QuasiForm};
use qmf_core::lfun::{lambda, LConfig, LContext};
use qmf_core::poles::find_poles;
use qmf_core::specfun::BranchConfig;
use rug::Complex;
use std::hint::black_box;

fn inv_delta() -> QuasiForm {
    QuasiForm::delta().pow(-1).unwrap()
}

fn series(c: &mut Criterion) {
    let f = inv_delta();
    c.bench_function("qexp 1/Delta to q^200", |b| b.iter(|| black_box(&f).qexp(200)));
    let g = QuasiForm::e6().pow(-1).unwrap();
    c.bench_function("qexp 1/E6 to q^100", |b| b.iter(|| black_box(&g).qexp(100)));
}

fn symbolic(c: &mut Criterion) {
    let f = inv_delta();
    c.bench_function("D^13 of 1/Delta", |b| b.iter(|| black_box(&f).d_pow(13)));
    let h = QuasiForm::e2().pow(5).unwrap().mul(&QuasiForm::e4());
    c.bench_function("decompose E2^5 E4", |b| b.iter(|| decompose(black_box(&h))));
    c.bench_function("rc bracket [1/Delta, E4]_8", |b| b.iter(|| rc_bracket(black_box(&f), &QuasiForm::e4(), 8).unwrap()));
}

fn numeric(c: &mut Criterion) {
    let mut g = c.benchmark_group("lfun");
    g.sample_size(10);
    let e6 = QuasiForm::e6().pow(-1).unwrap();
    g.bench_function("pole search 1/E6", |b| b.iter(|| find_poles(black_box(&e6), 0.7, 64).unwrap()));
    g.bench_function("context 1/E6 at 256 bits", |b| b.iter(|| LContext::new(black_box(&e6), &LConfig::default()).unwrap()));
    let s = Complex::with_val(288, (3.0, 2.0));
    for (name, f) in [("Delta", QuasiForm::delta()), ("1/E6", e6.clone())] {
        let ctx = LContext::new(&f, &LConfig::default()).unwrap();
        g.bench_function(format!("Lambda({name}, 3+2i) at 256 bits"), |b| b.iter(|| lambda(black_box(&ctx), &s).unwrap()));
    }
    let low = LConfig { prec: 128, branch: BranchConfig::default(), ..LConfig::default() };
    let ctx = LContext::new(&QuasiForm::delta(), &low).unwrap();
    g.bench_function("Lambda(Delta, 3+2i) at 128 bits", |b| b.iter(|| lambda(black_box(&ctx), &s).unwrap()));
    g.finish();
}

criterion_group!(benches, series, symbolic, numeric);
criterion_main!(benches);
