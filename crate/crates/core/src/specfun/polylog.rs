use super::{abs, as_integer, cpow, eps, pi, rgamma};
use super::zeta::hurwitz_zeta;
use crate::arith::{bernoulli, factorial};
use crate::error::{QmfError, Result};
use crate::poly::Poly;
use crate::scalar::ScalarPi;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

/// Li_{−n}(z) = N_n(z)/(1−z)^{n+1}; returns N_n with
/// N_0 = z and N_{n+1} = z[N_n′(1−z) + (n+1)N_n].
pub fn polylog_neg_int(n: u32) -> Poly {
    let mut num = Poly::x_pow(1);
    let one_minus = Poly::new(vec![Rational::from(1), Rational::from(-1)]);
    for j in 0..n {
        let t = num.deriv().mul(&one_minus).add(&num.scale(&Rational::from(j + 1)));
        num = t.shift(1);
    }
    num
}

fn series(s: &Complex, z: &Complex, prec: u32) -> Complex {
    let r = abs(z);
    let lr = -r.log2();
    let grow = (-s.real().to_f64()).max(0.0);
    let kmax = ((prec as f64 + 16.0) / lr) as u64 + 1;
    let guard = 16 + (grow * (kmax as f64 + 2.0).log2()) as u32;
    let wp = prec + guard;
    let s = Complex::with_val(wp, s);
    let z = Complex::with_val(wp, z);
    let ms = Complex::with_val(wp, -&s);
    let tol = eps(wp);
    let mut zk = z.clone();
    let mut sum = Complex::new(wp);
    let mut k = 1u64;
    loop {
        let kc = Complex::with_val(wp, k);
        let term = Complex::with_val(wp, &zk * cpow(&kc, &ms, wp));
        sum += &term;
        if k as f64 > grow / lr.max(1e-9) * 2.0 && k > 4 {
            let t = Float::with_val(64, term.abs_ref());
            if t <= Float::with_val(64, sum.abs_ref()) * &tol || t.is_zero() {
                break;
            }
        }
        zk *= &z;
        k += 1;
        if k > 100 * kmax + 1000 {
            break;
        }
    }
    Complex::with_val(prec, sum)
}

/// Li_s(z) = Γ(1−s)/(2π)^{1−s}[i^{1−s}ζ(1−s, 1/2 + ln(−z)/2πi) + i^{s−1}ζ(1−s, 1/2 − ln(−z)/2πi)].
fn jonquiere(s: &Complex, z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 32;
    let s = Complex::with_val(wp, s);
    let z = Complex::with_val(wp, z);
    let p = pi(wp);
    let two_pi_i = Complex::with_val(wp, (0, Float::with_val(wp, &p * 2u32)));
    let l = Complex::with_val(wp, Complex::with_val(wp, -&z).ln_ref()) / &two_pi_i;
    let half = Complex::with_val(wp, (0.5, 0));
    let a1 = Complex::with_val(wp, &half + &l);
    let a2 = Complex::with_val(wp, &half - &l);
    let oms = Complex::with_val(wp, 1 - &s);
    let z1 = hurwitz_zeta(&oms, &a1, wp)?;
    let z2 = hurwitz_zeta(&oms, &a2, wp)?;
    // i^{1−s} = e^{iπ(1−s)/2}
    let ipi2 = Complex::with_val(wp, (0, Float::with_val(wp, &p / 2u32)));
    let e1 = Complex::with_val(wp, &ipi2 * &oms).exp();
    let e2 = Complex::with_val(wp, e1.recip_ref());
    let tp = Complex::with_val(wp, Float::with_val(wp, &p * 2u32));
    let scale = Complex::with_val(wp, rgamma(&oms, wp) * cpow(&tp, &oms, wp)).recip();
    Ok(Complex::with_val(prec, scale * (e1 * z1 + e2 * z2)))
}

/// Polylogarithm Li_s(z) = Σ_{k≥1} z^k/k^s on the principal branch.
pub fn polylog(s: &Complex, z: &Complex, prec: u32) -> Result<Complex> {
    if let Some(n) = as_integer(s).filter(|&n| n <= 0) {
        let num = polylog_neg_int((-n) as u32);
        let wp = prec + 32;
        let z = Complex::with_val(wp, z);
        let den = Complex::with_val(wp, 1 - &z);
        if den.is_zero() {
            return Err(QmfError::DivisionByZero);
        }
        let d = Complex::with_val(wp, (&den).pow(1 - n as i32));
        return Ok(Complex::with_val(prec, num.eval_complex(&z) / d));
    }
    if z.imag().is_zero() && *z.real() >= 1 {
        if *z.real() == 1 && s.real().to_f64() > 1.0 {
            return hurwitz_zeta(s, &Complex::with_val(prec, 1), prec);
        }
        return Err(QmfError::BranchCut);
    }
    if abs(z) <= 0.5 {
        return Ok(series(s, z, prec));
    }
    let re = s.real().to_f64();
    let n = re.round();
    let d = abs(&Complex::with_val(64, s - n));
    if n >= 1.0 && d < 0.125 {
        return Ok(contour_mean(s, n as i64, z, prec));
    }
    let guard = if d < 1.0 { (-d.log2()) as u32 } else { 0 };
    jonquiere(s, z, prec + guard)
}

/// Value at s by the mean of Li over a circle of radius 1/4 about the nearest
/// positive integer, which stays clear of the removable Γ(1−s) poles.
fn contour_mean(s: &Complex, n: i64, z: &Complex, prec: u32) -> Complex {
    let wp = prec + 32;
    let nodes = (prec / 2 + 32) as usize;
    let center = Complex::with_val(wp, (n, 0));
    let ds = Complex::with_val(wp, s - &center);
    let p = pi(wp);
    let mut acc = Complex::new(wp);
    for j in 0..nodes {
        let th = Float::with_val(wp, &p * (2 * j as u32)) / nodes as u32;
        let w = Complex::with_val(wp, (th.clone().cos(), th.sin())) / 4u32;
        let sj = Complex::with_val(wp, &center + &w);
        let v = jonquiere(&sj, z, wp).expect("off the removable points");
        // Cauchy kernel w/(w − ds) for the value at ds inside the circle
        let k = Complex::with_val(wp, &w / Complex::with_val(wp, &w - &ds));
        acc += v * k;
    }
    Complex::with_val(prec, acc / nodes as u32)
}

/// Laurent data of Li_{1−m}(e(z)) at z = 0: the coefficient (m−1)!(−2πi)^{−m} of
/// z^{−m} and the regular coefficients ζ(1−m−k)(2πi)^k/k! for k < K.
pub fn polylog_laurent_coeffs(m: u32, k_count: usize) -> (ScalarPi, Vec<ScalarPi>) {
    assert!(m >= 1);
    let mi = m as i64;
    let r = Rational::from(factorial(m - 1)) / Rational::from(rug::Integer::from(-2).pow(m));
    let principal = ScalarPi::new(r, -mi, -mi);
    let regular = (0..k_count)
        .map(|k| {
            let n = m as usize + k;
            let b = bernoulli(n);
            let zeta = if n % 2 == 1 && n > 1 { Rational::new() } else { b * if n % 2 == 0 { -1 } else { 1 } / Rational::from(n as u32) };
            let two_k = Rational::from(rug::Integer::from(2).pow(k as u32));
            ScalarPi::new(zeta * two_k / Rational::from(factorial(k as u32)), k as i64, k as i64)
        })
        .collect();
    (principal, regular)
}
