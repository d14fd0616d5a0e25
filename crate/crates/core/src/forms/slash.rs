//! Numerical check of the transformation law (cτ+d)^{−k} f(γτ) = Σ_r f_r(τ)(c/(cτ+d))^r.

use super::quasi::QuasiForm;
use crate::error::{QmfError, Result};
use rug::ops::Pow;
use rug::{Complex, Float};

/// An element (a b; c d) of SL₂(ℤ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(QmfError::Inapplicable(format!("det({a} {b}; {c} {d}) != 1")));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn s() -> Self {
        Sl2 { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn act(&self, tau: &Complex) -> Complex {
        let prec = tau.prec().0;
        let num = Complex::with_val(prec, tau * self.a) + self.b;
        let den = Complex::with_val(prec, tau * self.c) + self.d;
        num / den
    }
}

/// |(cτ+d)^{−k} f(γτ) − Σ_r f_r(τ)(c/(cτ+d))^r|.
pub fn slash_check(f: &QuasiForm, g: &Sl2, tau: &Complex, prec: u32, floor: f64) -> Result<f64> {
    let wp = prec + 32;
    let tau = Complex::with_val(wp, tau);
    let gt = g.act(&tau);
    for t in [&tau, &gt] {
        let im = t.imag().to_f64();
        if im < floor {
            return Err(QmfError::PrecisionNotCertifiable { im, floor });
        }
    }
    let j = Complex::with_val(wp, &tau * g.c) + g.d;
    let lhs = f.eval(&gt, wp) / Complex::with_val(wp, j.clone().pow(f.weight() as i32));
    let ratio = Complex::with_val(wp, Float::with_val(wp, g.c) / &j);
    let mut rhs = Complex::new(wp);
    let mut rp = Complex::with_val(wp, 1);
    for (scalar, fr) in f.components() {
        rhs += fr.eval(&tau, wp) * scalar.to_complex(wp) * &rp;
        rp *= &ratio;
    }
    Ok(Complex::with_val(wp, lhs - rhs).abs().real().to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_under_s() {
        let tau = Complex::with_val(256, (0, 2));
        let f = QuasiForm::e4().div(&QuasiForm::delta()).unwrap();
        assert!(slash_check(&f, &Sl2::s(), &tau, 256, 0.15).unwrap() < 1e-30);
    }

    #[test]
    fn e2_under_s() {
        let tau = Complex::with_val(256, (Float::with_val(256, 1) / 3u32, 1));
        let r = slash_check(&QuasiForm::e2(), &Sl2::s(), &tau, 256, 0.15).unwrap();
        assert!(r < 1e-25, "{r}");
    }

    #[test]
    fn derivative_of_inverse_delta() {
        let f = QuasiForm::delta().pow(-1).unwrap().d();
        let g = Sl2::new(2, 1, 5, 3).unwrap();
        let tau = Complex::with_val(256, (-0.6 + 0.02, 0.2));
        let r = slash_check(&f, &g, &tau, 256, 0.15).unwrap();
        assert!(r < 1e-25, "{r}");
    }

    #[test]
    fn floor_is_enforced() {
        let tau = Complex::with_val(64, (0, 0.05));
        assert!(slash_check(&QuasiForm::e4(), &Sl2::s(), &tau, 64, 0.15).is_err());
        assert!(Sl2::new(1, 1, 1, 1).is_err());
    }
}
