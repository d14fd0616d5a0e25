//! Tanh-sinh quadrature on complex segments.

use crate::specfun::{eps, pi};
use rug::{Complex, Float};

const MAX_LEVEL: u32 = 14;

/// One node of the rule at step h: the offset k·h and the point/weight pair.
fn node(kh: &Float, a: &Complex, b: &Complex, wp: u32) -> (Complex, Float) {
    let half_pi = Float::with_val(wp, pi(wp) / 2u32);
    let sh = Float::with_val(wp, kh.sinh_ref());
    let ch = Float::with_val(wp, kh.cosh_ref());
    let y = Float::with_val(wp, &half_pi * &sh);
    let cy = Float::with_val(wp, y.cosh_ref());
    let w = Float::with_val(wp, &half_pi * &ch) / Float::with_val(wp, &cy * &cy);
    // distance to the nearer endpoint without cancellation
    let len = Complex::with_val(wp, b - a);
    let t = if y.is_sign_negative() {
        let e = Float::with_val(wp, Float::with_val(wp, &y * -2i32).exp() + 1u32);
        Complex::with_val(wp, a + Complex::with_val(wp, &len / e))
    } else {
        let e = Float::with_val(wp, Float::with_val(wp, &y * 2u32).exp() + 1u32);
        Complex::with_val(wp, b - Complex::with_val(wp, &len / e))
    };
    (t, w)
}

/// ∫_a^b f(t) dt along the straight segment, to about 2^{−prec}·max(1, |value|).
pub fn quad<F: Fn(&Complex) -> Complex>(f: F, a: &Complex, b: &Complex, prec: u32) -> Complex {
    quad_with_level(&f, a, b, prec).0
}

/// Same as [`quad`], also returning the level reached (h = 2^{−level}).
pub fn quad_with_level<F: Fn(&Complex) -> Complex>(f: &F, a: &Complex, b: &Complex, prec: u32) -> (Complex, u32) {
    let (mut v, level) = quad_many_with_level(&|t: &Complex| vec![f(t)], a, b, prec);
    (v.pop().expect("one component"), level)
}

/// Componentwise [`quad`] of a vector-valued integrand, sharing the nodes.
pub fn quad_many<F: Fn(&Complex) -> Vec<Complex>>(f: F, a: &Complex, b: &Complex, prec: u32) -> Vec<Complex> {
    quad_many_with_level(&f, a, b, prec).0
}

fn quad_many_with_level<F: Fn(&Complex) -> Vec<Complex>>(f: &F, a: &Complex, b: &Complex, prec: u32) -> (Vec<Complex>, u32) {
    let wp = prec + 20;
    let half_len = Complex::with_val(wp, Complex::with_val(wp, b - a) / 2u32);
    let mut h = Float::with_val(wp, 1);
    let (t0, w0) = node(&Float::new(wp), a, b, wp);
    let mut sum: Vec<Complex> = f(&t0).into_iter().map(|v| Complex::with_val(wp, v * &w0)).collect();
    // weights fall below 2^{−wp−40} well before |kh| reaches this, even against t^{−3/4} endpoint growth
    let t_max = ((wp as f64 + 40.0) * 0.8825).ln() + 0.5;
    let add_side = |sum: &mut Vec<Complex>, h: &Float, start: u64, step: u64| {
        let hf = h.to_f64();
        for sign in [1i32, -1] {
            let mut k = start;
            while k as f64 * hf <= t_max {
                let kh = Float::with_val(wp, h * k) * sign;
                let (t, w) = node(&kh, a, b, wp);
                if t == *a || t == *b || w.is_zero() {
                    break;
                }
                for (acc, v) in sum.iter_mut().zip(f(&t)) {
                    *acc += v * &w;
                }
                k += step;
            }
        }
    };
    let scaled = |sum: &[Complex], h: &Float| -> Vec<Complex> { sum.iter().map(|v| Complex::with_val(wp, v * h)).collect() };
    add_side(&mut sum, &h, 1, 1);
    let mut prev = scaled(&sum, &h);
    // the error roughly squares per level, so a difference of 2^{−prec/2} leaves about 2^{−prec}
    let tol = eps(prec / 2 + 8);
    let one = Float::with_val(64, 1);
    let mut level = 1;
    while level <= MAX_LEVEL {
        h /= 2u32;
        add_side(&mut sum, &h, 1, 2);
        let cur = scaled(&sum, &h);
        let done = cur.iter().zip(&prev).all(|(c, p)| {
            let d = Float::with_val(64, Complex::with_val(wp, c - p).abs_ref());
            let scale = Float::with_val(64, c.abs_ref()).max(&one);
            d <= Float::with_val(64, &scale * &tol)
        });
        prev = cur;
        if level >= 4 && done {
            break;
        }
        level += 1;
    }
    let out = prev.iter().map(|v| Complex::with_val(prec, v * &half_len)).collect();
    (out, level.min(MAX_LEVEL))
}

/// Fixed-level rule on [a,b] returned as (points, weights·(b−a)/2·h), reusable across integrands.
pub fn rule(a: &Complex, b: &Complex, level: u32, prec: u32) -> Vec<(Complex, Complex)> {
    let wp = prec + 20;
    let wcut = eps(2 * wp);
    let h = Float::with_val(wp, Float::i_exp(1, -(level as i32)));
    let scale = Complex::with_val(wp, Complex::with_val(wp, b - a) / 2u32) * &h;
    let mut out = Vec::new();
    let (t0, w0) = node(&Float::new(wp), a, b, wp);
    out.push((t0, Complex::with_val(wp, &scale * &w0)));
    let mut k = 1u64;
    loop {
        let mut any = false;
        for sign in [1i32, -1] {
            let kh = Float::with_val(wp, &h * k) * sign;
            let (t, w) = node(&kh, a, b, wp);
            if w < wcut || t == *a || t == *b {
                continue;
            }
            any = true;
            out.push((t, Complex::with_val(wp, &scale * &w)));
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::abs;

    #[test]
    fn polynomial_and_exponential() {
        let prec = 200;
        let a = Complex::with_val(prec, 0);
        let b = Complex::with_val(prec, 2);
        let v = quad(|t| Complex::with_val(prec, t * t), &a, &b, prec);
        assert!(abs(&Complex::with_val(prec, v - Float::with_val(prec, 8) / 3u32)) < 1e-55);
        let v = quad(|t| Complex::with_val(prec, -t).exp(), &a, &b, prec);
        let expect = 1 - Float::with_val(prec, -2).exp();
        assert!(abs(&Complex::with_val(prec, v - expect)) < 1e-55);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 t^{−1/2} dt = 2
        let prec = 200;
        let a = Complex::with_val(prec, 0);
        let b = Complex::with_val(prec, 1);
        let v = quad(|t| Complex::with_val(prec, t.sqrt_ref()).recip(), &a, &b, prec);
        assert!(abs(&Complex::with_val(prec, v - 2u32)) < 1e-50);
    }

    #[test]
    fn complex_segment() {
        // ∫ along [0, i] of e^t = e^i − 1
        let prec = 128;
        let a = Complex::with_val(prec, 0);
        let b = Complex::with_val(prec, (0, 1));
        let v = quad(|t| Complex::with_val(prec, t.exp_ref()), &a, &b, prec);
        let expect = Complex::with_val(prec, b.exp_ref()) - 1u32;
        assert!(abs(&Complex::with_val(prec, v - expect)) < 1e-35);
    }
}
