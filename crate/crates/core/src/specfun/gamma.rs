use super::{abs, pi};
use crate::arith::bernoulli;
use rug::{Complex, Float};

/// ln Γ(z) by the Stirling series, valid once Re z is large.
fn stirling(z: &Complex, prec: u32) -> Complex {
    let half_ln_2pi = Float::with_val(prec, pi(prec) * 2u32).ln() / 2u32;
    let lnz = Complex::with_val(prec, z.ln_ref());
    let mut acc = Complex::with_val(prec, z - 0.5f64) * &lnz - z + half_ln_2pi;
    let z2 = Complex::with_val(prec, z * z);
    let mut zp = Complex::with_val(prec, z.recip_ref());
    let tol = super::eps(prec + 4);
    for k in 1..(4 * prec as usize) {
        let b = bernoulli(2 * k);
        let coef = Float::with_val(prec, &b) / ((2 * k) as u64 * (2 * k - 1) as u64);
        let term = Complex::with_val(prec, &zp * &coef);
        acc += &term;
        if Float::with_val(64, term.abs_ref()) < tol {
            break;
        }
        zp /= &z2;
    }
    acc
}

fn shift_for(prec: u32) -> f64 {
    0.12 * prec as f64 + 8.0
}

/// 1/Γ(s), entire; exact zeros at nonpositive integers.
pub fn rgamma(s: &Complex, prec: u32) -> Complex {
    let wp = prec + 32 + (abs(s).max(1.0).log2() as u32) * 2;
    let target = shift_for(wp);
    let re = s.real().to_f64();
    let m = if re < target { (target - re).ceil() as u64 } else { 0 };
    let mut prod = Complex::with_val(wp, 1);
    let mut z = Complex::with_val(wp, s);
    for _ in 0..m {
        prod *= &z;
        z += 1u32;
    }
    let lg = stirling(&z, wp);
    Complex::with_val(prec, prod * Complex::with_val(wp, -lg).exp())
}

/// Γ(s); infinite at the poles.
pub fn gamma(s: &Complex, prec: u32) -> Complex {
    let r = rgamma(s, prec + 8);
    Complex::with_val(prec, r.recip())
}

/// A logarithm of Γ(s) (principal branch only for Re s > 0).
pub fn ln_gamma(s: &Complex, prec: u32) -> Complex {
    let wp = prec + 32;
    let r = rgamma(s, wp);
    Complex::with_val(prec, -Complex::with_val(wp, r.ln_ref()))
}
