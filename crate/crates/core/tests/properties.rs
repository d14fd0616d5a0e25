//! Algebraic invariants on randomly generated quasi-modular forms.

use proptest::prelude::*;
use qmf_core::forms::{decompose, QuasiForm};
use qmf_core::QSeries;
use rug::Rational;

/// c·E2^a·E4^b·E6^c·Δ^d from small exponents.
fn monomial(c: i64, a: i64, b: i64, e: i64, d: i64) -> QuasiForm {
    let parts = [(QuasiForm::e2(), a), (QuasiForm::e4(), b), (QuasiForm::e6(), e), (QuasiForm::delta(), d)];
    let mut f = QuasiForm::constant(c);
    for (g, n) in parts {
        f = f.mul(&g.pow(n).unwrap());
    }
    f
}

fn arb_form() -> impl Strategy<Value = QuasiForm> {
    (-3i64..=3, 0i64..=3, 0i64..=2, 0i64..=2, -1i64..=1)
        .prop_filter("nonzero", |t| t.0 != 0)
        .prop_map(|(c, a, b, e, d)| monomial(c, a, b, e, d))
}

/// Two forms of the same weight.
fn arb_pair() -> impl Strategy<Value = (QuasiForm, QuasiForm)> {
    (arb_form(), -3i64..=3, 0i64..=2).prop_map(|(f, c, a)| {
        // E2^a·E4^b·Δ^d with the weight of f, using E4 and Δ to absorb the rest
        let mut rest = f.weight() - 2 * a;
        let d = rest.div_euclid(12) - 1;
        rest -= 12 * d;
        let mut g = QuasiForm::constant(if c == 0 { 1 } else { c }).mul(&QuasiForm::e2().pow(a).unwrap()).mul(&QuasiForm::delta().pow(d).unwrap());
        // rest is now in 12..23 and even; E4^i E6^j covers every even weight ≥ 4 except 2
        let (i, j) = match rest % 12 {
            0 => (3, 0),
            2 => (2, 1),
            4 => (1, 0),
            6 => (0, 1),
            8 => (2, 0),
            _ => (1, 1),
        };
        let base = 4 * i + 6 * j;
        g = g.mul(&QuasiForm::e4().pow(i).unwrap()).mul(&QuasiForm::e6().pow(j).unwrap());
        g = g.mul(&QuasiForm::delta().pow((rest - base) / 12).unwrap());
        (f, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_commutative_and_associative(f in arb_form(), g in arb_form(), h in arb_form()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
    }

    #[test]
    fn addition_matches_series((f, g) in arb_pair()) {
        let s = f.add(&g).unwrap();
        prop_assert_eq!(s.weight(), f.weight());
        prop_assert_eq!(s.qexp(12), &f.qexp(12) + &g.qexp(12));
    }

    #[test]
    fn derivative_obeys_leibniz(f in arb_form(), g in arb_form()) {
        let lhs = f.mul(&g).d();
        let rhs = f.d().mul(&g).add(&f.mul(&g.d())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_matches_series(f in arb_form()) {
        let n = 15;
        prop_assert_eq!(f.d().qexp(n), f.qexp(n).d());
    }

    #[test]
    fn derivative_raises_depth_by_at_most_one(f in arb_form(), p in 1u32..4) {
        let g = f.d_pow(p);
        prop_assert_eq!(g.weight(), f.weight() + 2 * p as i64);
        prop_assert!(g.depth() <= f.depth() + p as usize);
    }

    #[test]
    fn serre_derivative_keeps_depth(f in arb_form()) {
        prop_assert!(f.serre().depth() <= f.depth());
    }

    #[test]
    fn decomposition_resynthesizes((f, g) in arb_pair(), p in 0u32..3) {
        let h = f.add(&g).unwrap().d_pow(p);
        prop_assert_eq!(decompose(&h).resynthesize(), h);
    }

    #[test]
    fn series_inverse_is_two_sided(f in arb_form()) {
        let s = f.qexp(20);
        let inv = s.invert().unwrap();
        let one = &s * &inv;
        prop_assert_eq!(one.truncate(one.trunc()), QSeries::one(one.trunc()));
    }

    #[test]
    fn scaling_is_linear(f in arb_form(), a in -20i64..20, b in 1i64..20) {
        let r = Rational::from((a, b));
        prop_assert_eq!(f.scale(&r).qexp(10), f.qexp(10).scale(&r));
    }
}
