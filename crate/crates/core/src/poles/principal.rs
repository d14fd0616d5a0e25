//! Principal parts c(m) = (1/2πi)∮ f(τ)(τ − α)^{m−1} dτ by the trapezoid rule on a circle.

use super::{denominator, DenEval, PoleRecord};
use crate::error::{QmfError, Result};
use crate::forms::QuasiForm;
use crate::specfun::pi;
use rug::ops::Pow;
use rug::{Complex, Float};

const COUNT_PREC: u32 = 64;
const COUNT_NODES: u32 = 128;

fn circle_point(alpha: &Complex, r: &Float, j: u32, m: u32, wp: u32) -> Complex {
    let theta = Float::with_val(wp, pi(wp) * 2u32) * j / m;
    let w = Complex::with_val(wp, (theta.clone().cos(), theta.sin()));
    Complex::with_val(wp, alpha + Complex::with_val(wp, w * r))
}

/// Number of zeros of the denominator in the disc |τ − α| < ρ.
fn disc_count(den: &DenEval, alpha: &Complex, rho: f64) -> Option<u32> {
    let p = COUNT_PREC;
    let r = Float::with_val(p, rho);
    let mut acc = Complex::new(p);
    for j in 0..COUNT_NODES {
        let t = circle_point(alpha, &r, j, COUNT_NODES, p);
        let u = Complex::with_val(p, &t - alpha);
        acc += den.log_deriv(&t, p) * u;
    }
    let two_pi_i = Complex::with_val(p, (0, pi(p) * 2u32));
    let n = acc * two_pi_i / COUNT_NODES;
    let re = n.real().to_f64();
    let k = re.round();
    ((re - k).abs() + n.imag().to_f64().abs() < 0.05 && k >= 0.0).then_some(k as u32)
}

/// Largest radius (≤ Im α/4) whose 1/16..2 annulus holds no zero of the denominator.
fn radius(den: &DenEval, alpha: &Complex) -> Result<f64> {
    let mut r = (alpha.imag().to_f64() / 4.0).min(0.25);
    for _ in 0..8 {
        if let (Some(a), Some(b)) = (disc_count(den, alpha, 2.0 * r), disc_count(den, alpha, r / 16.0)) {
            if a == b {
                return Ok(r);
            }
        }
        r /= 2.0;
    }
    Err(QmfError::Geometry(format!("no clear circle around {}", alpha.to_string_radix(10, Some(12)))))
}

/// Trapezoid sums (1/M)Σ f(τⱼ)(τⱼ − α)^m for m = 1..order.
fn coeffs(vals: &[Complex], order: u32, r: &Float, wp: u32) -> Vec<Complex> {
    let m = vals.len() as u32;
    (1..=order)
        .map(|k| {
            let mut acc = Complex::new(wp);
            for (j, v) in vals.iter().enumerate() {
                let theta = Float::with_val(wp, pi(wp) * 2u32) * (j as u64 * k as u64) / m;
                let w = Complex::with_val(wp, (theta.clone().cos(), theta.sin()));
                acc += Complex::with_val(wp, v * &w);
            }
            acc * Float::with_val(wp, r.pow(k)) / m
        })
        .collect()
}

/// Principal part of f at α up to the given order, converged under node doubling.
pub fn principal_part(f: &QuasiForm, alpha: &Complex, order: u32, prec: u32) -> Result<PoleRecord> {
    let den = DenEval::new(denominator(f));
    let r64 = radius(&den, alpha)?;
    let wp = prec + 32;
    let alpha = Complex::with_val(wp, alpha);
    let r = Float::with_val(wp, r64);
    let sample = |j: u32, m: u32| f.eval(&circle_point(&alpha, &r, j, m, wp), wp);
    let mut m = wp + 16;
    let mut vals: Vec<Complex> = (0..m).map(|j| sample(j, m)).collect();
    let mut prev = coeffs(&vals, order, &r, wp);
    for _ in 0..4 {
        let odd: Vec<Complex> = (0..m).map(|j| sample(2 * j + 1, 2 * m)).collect();
        vals = vals.into_iter().zip(odd).flat_map(|(e, o)| [e, o]).collect();
        m *= 2;
        let cur = coeffs(&vals, order, &r, wp);
        let fmax = vals.iter().map(|v| Float::with_val(64, v.abs_ref())).fold(Float::with_val(64, 0), |a, b| a.max(&b));
        let scales: Vec<Float> = (1..=order).map(|k| Float::with_val(64, &fmax * Float::with_val(64, r.clone().pow(k)))).collect();
        let tol = Float::with_val(64, Float::i_exp(1, 24 - prec as i32));
        let converged = cur.iter().zip(&prev).zip(&scales).all(|((c, p), s)| {
            Float::with_val(64, Complex::with_val(wp, c - p).abs_ref()) < Float::with_val(64, &tol * s)
        });
        if converged {
            let coeffs = cur.into_iter().map(|c| Complex::with_val(prec, c)).collect();
            return Ok(PoleRecord::new(Complex::with_val(prec, &alpha), coeffs, scales, prec));
        }
        prev = cur;
    }
    Err(QmfError::Geometry("principal part did not converge under node doubling".into()))
}
