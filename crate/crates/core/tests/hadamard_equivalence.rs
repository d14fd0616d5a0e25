//! The five regularizations of a pole integral agree.

use qmf_core::reg::{hadamard_method, HadamardMethod, Integrand};
use rug::{Complex, Float};

const PREC: u32 = 256;

fn integrand(kind: usize, n: u32) -> Integrand {
    Integrand::new(move |t: &Complex, p: u32| {
        let num = match kind {
            0 => Complex::with_val(p, -t).exp(),
            1 => Complex::with_val(p, t.cos_ref()),
            _ => Complex::with_val(p, t * Complex::with_val(p, -t).exp()),
        };
        let u = Complex::with_val(p, t - 1u32);
        let mut d = Complex::with_val(p, 1);
        for _ in 0..n {
            d *= &u;
        }
        num / d
    })
    .with_pole(Float::with_val(PREC, 1), n)
}

fn check(kind: usize, n: u32) {
    let a = Float::with_val(PREC, 0);
    let b = Float::with_val(PREC, 2);
    let c = Float::with_val(PREC, 1);
    let f = integrand(kind, n);
    let vals: Vec<Complex> = HadamardMethod::ALL.iter().map(|m| hadamard_method(&f, &a, &b, &c, n, *m, PREC).unwrap()).collect();
    for i in 0..vals.len() {
        for j in 0..i {
            let d = Complex::with_val(PREC, &vals[i] - &vals[j]).abs().real().to_f64();
            assert!(d < 1e-30, "kind {kind}, order {n}: {:?} vs {:?} differ by {d:e}", HadamardMethod::ALL[i], HadamardMethod::ALL[j]);
        }
    }
}

macro_rules! grid {
    ($($name:ident: $kind:expr, $n:expr;)*) => {
        $(#[test]
        fn $name() {
            check($kind, $n);
        })*
    };
}

grid! {
    exp_order_1: 0, 1;
    exp_order_2: 0, 2;
    exp_order_3: 0, 3;
    exp_order_4: 0, 4;
    cos_order_1: 1, 1;
    cos_order_2: 1, 2;
    cos_order_3: 1, 3;
    cos_order_4: 1, 4;
    texp_order_1: 2, 1;
    texp_order_2: 2, 2;
    texp_order_3: 2, 3;
    texp_order_4: 2, 4;
}

#[test]
fn holomorphic_integrand_matches_quadrature() {
    // e^{−t}(t−1)^2/(t−1)^2 has a removable singularity; the regularized value is the plain integral
    let f = Integrand::new(|t: &Complex, p: u32| Complex::with_val(p, -t).exp()).with_pole(Float::with_val(PREC, 1), 1);
    let v = hadamard_method(&f, &Float::with_val(PREC, 0), &Float::with_val(PREC, 2), &Float::with_val(PREC, 1), 1, HadamardMethod::FinitePart, PREC).unwrap();
    let expect = 1 - Float::with_val(PREC, -2).exp();
    let d = Complex::with_val(PREC, v - expect).abs().real().to_f64();
    assert!(d < 1e-60);
}
