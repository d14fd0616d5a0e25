//! Numeric values of E₂, E₄, E₆ and Δ at a point of the upper half-plane.

use crate::qseries::q_of;
use rug::ops::Pow;
use rug::{Complex, Float};

#[derive(Clone, Debug)]
pub struct EisValues {
    pub e2: Complex,
    pub e4: Complex,
    pub e6: Complex,
    pub delta: Complex,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// Lambert series for E₂, E₄, E₆ and the product formula for Δ.
///
/// Accuracy degrades gracefully as Im τ decreases; callers keep Im τ ≳ 0.1.
pub fn eisenstein_values(tau: &Complex, prec: u32) -> EisValues {
    let wp = prec + 64;
    let q = q_of(tau, wp);
    let absq = q.clone().abs().real().to_f64();
    assert!(absq < 1.0, "tau must lie in the upper half-plane");
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut s1 = Complex::new(wp);
    let mut s3 = Complex::new(wp);
    let mut s5 = Complex::new(wp);
    let mut prod = Complex::with_val(wp, 1);
    let mut qn = q.clone();
    let mut n: u64 = 1;
    loop {
        let one_minus = Complex::with_val(wp, 1 - &qn);
        let l = Complex::with_val(wp, &qn / &one_minus);
        let nf = Float::with_val(wp, n);
        let n3 = Float::with_val(wp, &nf * &nf) * &nf;
        let n5 = Float::with_val(wp, &n3 * &nf) * &nf;
        s1 += Complex::with_val(wp, &l * &nf);
        s3 += Complex::with_val(wp, &l * &n3);
        let t5 = Complex::with_val(wp, &l * &n5);
        s5 += &t5;
        prod *= one_minus;
        let mag = Float::with_val(wp, t5.abs_ref());
        if mag < eps && n > 2 {
            break;
        }
        qn *= &q;
        n += 1;
    }
    let e2 = Complex::with_val(prec, 1 - s1 * 24u32);
    let e4 = Complex::with_val(prec, 1 + s3 * 240u32);
    let e6 = Complex::with_val(prec, 1 - s5 * 504u32);
    let p24 = prod.pow(24u32);
    let delta = Complex::with_val(prec, q * p24);
    EisValues { e2, e4, e6, delta }
}

/// Decimal string carrying all significant digits of `x`.
pub fn float_decimal(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    x.to_string_radix(10, Some(digits))
}

/// `[re, im]` as full-precision decimal strings.
pub fn complex_json(z: &Complex) -> serde_json::Value {
    serde_json::json!([float_decimal(z.real()), float_decimal(z.imag())])
}

/// Y = −1/(4π Im τ).
pub fn y_symbol(tau: &Complex, prec: u32) -> Float {
    let four_pi = pi(prec) * 4u32;
    -Float::with_val(prec, 1) / (four_pi * tau.imag())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values_at_i() {
        let tau = Complex::with_val(128, (0, 1));
        let v = eisenstein_values(&tau, 128);
        assert!(v.e6.clone().abs().real().to_f64() < 1e-35);
        // E₂(i) = 3/π
        let e2 = 3.0 / std::f64::consts::PI;
        assert!((v.e2.real().to_f64() - e2).abs() < 1e-15);
        let lhs = Complex::with_val(128, v.e4.clone().pow(3u32) - v.e6.clone().pow(2u32)) / 1728u32;
        let diff = Complex::with_val(128, lhs - &v.delta).abs().real().to_f64();
        assert!(diff < 1e-35);
    }

    #[test]
    fn e4_vanishes_at_rho() {
        let half = Float::with_val(128, 3).sqrt() / 2u32;
        let tau = Complex::with_val(128, (-0.5, half));
        let v = eisenstein_values(&tau, 128);
        assert!(v.e4.abs().real().to_f64() < 1e-35);
    }

    #[test]
    fn e2_quasimodular_under_s() {
        // E₂(−1/τ) = τ² E₂(τ) + 6τ/(πi)
        let prec = 128;
        let tau = Complex::with_val(prec, (0.3, 0.8));
        let st = Complex::with_val(prec, -Complex::with_val(prec, 1) / &tau);
        let a = eisenstein_values(&st, prec).e2;
        let e2 = eisenstein_values(&tau, prec).e2;
        let pi_i = Complex::with_val(prec, (0, pi(prec)));
        let b = Complex::with_val(prec, &tau * &tau) * e2 + Complex::with_val(prec, &tau * 6u32) / pi_i;
        assert!(Complex::with_val(prec, a - b).abs().real().to_f64() < 1e-33);
    }
}
