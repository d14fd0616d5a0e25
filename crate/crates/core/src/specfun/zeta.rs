use super::{abs, cpow, eps, phi};
use crate::arith::{bernoulli, factorial};
use crate::error::{QmfError, Result};
use rug::{Complex, Float};

/// Hurwitz zeta ζ(s,a) = Σ_{n≥0} (n+a)^{−s} with principal powers, continued in s.
pub fn hurwitz_zeta(s: &Complex, a: &Complex, prec: u32) -> Result<Complex> {
    if a.imag().is_zero() && a.real().is_integer() && *a.real() <= 0 {
        return Err(QmfError::ZetaShiftPole);
    }
    if s.imag().is_zero() && *s.real() == 1 {
        return Err(QmfError::Inapplicable("Hurwitz zeta has a pole at s = 1".into()));
    }
    Ok(euler_maclaurin(s, a, prec, false))
}

/// ζ(s,a) − 1/(s−1), entire in s; the pole term is fused so s = 1 needs no special care.
pub fn hurwitz_zeta_regular(s: &Complex, a: &Complex, prec: u32) -> Result<Complex> {
    if a.imag().is_zero() && a.real().is_integer() && *a.real() <= 0 {
        return Err(QmfError::ZetaShiftPole);
    }
    Ok(euler_maclaurin(s, a, prec, true))
}

fn euler_maclaurin(s: &Complex, a: &Complex, prec: u32, regular: bool) -> Complex {
    let sabs = abs(s);
    let m_terms = (prec as f64 / 3.0 + 10.0) as usize;
    let shift = (-a.real().to_f64()).max(0.0).ceil();
    let n_terms = (sabs + 2.0 * m_terms as f64 + shift + 2.0) as u64;
    let mag = (n_terms as f64 + abs(a) + 1.0).log2();
    let guard = 32 + ((-s.real().to_f64()).max(0.0) + 1.0) as u32 * mag.ceil() as u32;
    let wp = prec + guard;
    let s = Complex::with_val(wp, s);
    let a = Complex::with_val(wp, a);
    let ms = Complex::with_val(wp, -&s);
    let mut sum = Complex::new(wp);
    for n in 0..n_terms {
        let x = Complex::with_val(wp, &a + n);
        sum += cpow(&x, &ms, wp);
    }
    let x = Complex::with_val(wp, &a + n_terms);
    let xs = cpow(&x, &ms, wp);
    let sm1 = Complex::with_val(wp, &s - 1u32);
    if regular {
        // x^{1−s}/(s−1) − 1/(s−1) = −ln x · φ((1−s) ln x)
        let l = Complex::with_val(wp, x.ln_ref());
        let z = Complex::with_val(wp, &l * Complex::with_val(wp, -&sm1));
        sum -= l * phi(&z, wp);
    } else {
        sum += Complex::with_val(wp, &xs * &x) / &sm1;
    }
    sum += Complex::with_val(wp, &xs / 2u32);
    // Σ B_{2k}/(2k)! (s)_{2k−1} x^{−s−2k+1}
    let tol = eps(wp);
    let x2 = Complex::with_val(wp, &x * &x);
    let mut rising = s.clone();
    let mut xp = Complex::with_val(wp, &xs / &x);
    for k in 1..=m_terms {
        let b = bernoulli(2 * k) / factorial(2 * k as u32);
        let term = Complex::with_val(wp, &rising * &xp) * Float::with_val(wp, &b);
        sum += &term;
        if Float::with_val(64, term.abs_ref()) < Float::with_val(64, sum.abs_ref()) * &tol {
            break;
        }
        let s1 = Complex::with_val(wp, &s + (2 * k - 1) as u32);
        let s2 = Complex::with_val(wp, &s + (2 * k) as u32);
        rising *= s1 * s2;
        xp /= &x2;
    }
    Complex::with_val(prec, sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{c, pi};

    #[test]
    fn riemann_values() {
        let prec = 256;
        let one = c(prec, 1.0, 0.0);
        let z2 = hurwitz_zeta(&c(prec, 2.0, 0.0), &one, prec).unwrap();
        let p = pi(prec);
        let expect = Float::with_val(prec, &p * &p) / 6u32;
        assert!((Float::with_val(prec, z2.real() - expect)).abs() < 1e-70);
        // ζ(−1) = −1/12, ζ(0, a) = 1/2 − a
        let zm1 = hurwitz_zeta(&c(prec, -1.0, 0.0), &one, prec).unwrap();
        assert!((zm1.real().to_f64() + 1.0 / 12.0).abs() < 1e-60);
        let a = c(prec, 0.3, 0.7);
        let z0 = hurwitz_zeta(&c(prec, 0.0, 0.0), &a, prec).unwrap();
        let r = Complex::with_val(prec, &z0 - (Complex::with_val(prec, 0.5) - &a));
        assert!(abs(&r) < 1e-60);
    }

    #[test]
    fn regular_part_matches_and_continues_through_one() {
        let prec = 200;
        let a = c(prec, 0.4, -0.9);
        let s = c(prec, 1.3, 0.2);
        let z = hurwitz_zeta(&s, &a, prec).unwrap();
        let sm1 = Complex::with_val(prec, &s - 1u32);
        let r = hurwitz_zeta_regular(&s, &a, prec).unwrap();
        assert!(abs(&Complex::with_val(prec, z - Complex::with_val(prec, sm1.recip_ref()) - r)) < 1e-50);
        // at s = 1 the regular part is −ψ(a); for a = 1 that is Euler's γ
        let g = hurwitz_zeta_regular(&c(prec, 1.0, 0.0), &c(prec, 1.0, 0.0), prec).unwrap();
        let euler = Float::with_val(prec, rug::float::Constant::Euler);
        assert!(abs(&Complex::with_val(prec, g - euler)) < 1e-55);
    }

    #[test]
    fn shift_relation() {
        // ζ(s,a) − ζ(s,a+1) = a^{−s}
        let prec = 200;
        for (s, a) in [((0.5, 14.0), (0.25, 0.0)), ((-3.5, 2.0), (0.7, -1.3)), ((3.0, -1.0), (-2.4, 0.5))] {
            let s = c(prec, s.0, s.1);
            let a = c(prec, a.0, a.1);
            let a1 = Complex::with_val(prec, &a + 1u32);
            let lhs = hurwitz_zeta(&s, &a, prec).unwrap() - hurwitz_zeta(&s, &a1, prec).unwrap();
            let ms = Complex::with_val(prec, -&s);
            let rhs = cpow(&a, &ms, prec);
            let d = abs(&Complex::with_val(prec, lhs - &rhs));
            assert!(d < 1e-50 * abs(&rhs).max(1.0), "residual {d}");
        }
    }

    #[test]
    fn bernoulli_polynomial_at_negative_integers() {
        // ζ(−n, a) = −B_{n+1}(a)/(n+1); for n = 2: −(a³ − 3a²/2 + a/2)/3
        let prec = 200;
        let a = c(prec, 0.4, 0.2);
        let v = hurwitz_zeta(&c(prec, -2.0, 0.0), &a, prec).unwrap();
        let a2 = Complex::with_val(prec, &a * &a);
        let a3 = Complex::with_val(prec, &a2 * &a);
        let b3 = a3 - a2 * Float::with_val(prec, 1.5) + Complex::with_val(prec, &a / 2u32);
        let expect = Complex::with_val(prec, -b3 / 3u32);
        assert!(abs(&Complex::with_val(prec, v - expect)) < 1e-50);
    }

    #[test]
    fn poles_are_errors() {
        let prec = 64;
        assert!(matches!(hurwitz_zeta(&c(prec, 2.0, 0.0), &c(prec, -3.0, 0.0), prec), Err(QmfError::ZetaShiftPole)));
        assert!(hurwitz_zeta(&c(prec, 1.0, 0.0), &c(prec, 0.5, 0.0), prec).is_err());
    }
}
