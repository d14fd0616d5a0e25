//! G_m(s, α, t₀) = ∫_{t₀}^{∞,*} Li_{−m}(e(it − α)) t^{s−1} dt in closed form, entire in s.

use crate::error::{QmfError, Result};
use crate::specfun::{cpow, hurwitz_zeta, hurwitz_zeta_regular, phi, pi, polylog, rgamma, upper_gamma, BranchConfig};
use rug::ops::Pow;
use rug::{Complex, Float};

/// Terms needed for Σ n^{m+|s|} e^{−2πn·gap} to fall below 2^{−wp}.
fn n_max(gap: f64, m: u32, s: &Complex, wp: u32) -> u64 {
    let growth = (m as f64 + s.real().to_f64().abs() + s.imag().to_f64().abs() + 2.0) * (wp as f64).ln();
    ((wp as f64 * std::f64::consts::LN_2 + growth) / (2.0 * std::f64::consts::PI * gap)).ceil() as u64 + 2
}

/// e^{iπx}.
fn e_i_pi(x: &Complex, wp: u32) -> Complex {
    Complex::with_val(wp, x * Complex::with_val(wp, (0, pi(wp)))).exp()
}

/// Σ_{n≥1} n^m e^{∓2πinα} Γ(s, ±2πnt₀)/(2πn)^s, upper signs below the pole height.
fn gamma_sum(m: u32, s: &Complex, alpha: &Complex, t0: &Float, below: bool, wp: u32, branch: &BranchConfig) -> Result<Complex> {
    let gap = (t0.to_f64() - alpha.imag().to_f64()).abs();
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let sign: i32 = if below { 1 } else { -1 };
    let phase = Complex::with_val(wp, alpha * Complex::with_val(wp, (0, Float::with_val(wp, &two_pi * -sign)))).exp();
    let mut e = Complex::with_val(wp, 1);
    let mut acc = Complex::new(wp);
    for n in 1..=n_max(gap, m, s, wp) {
        e *= &phase;
        let x = Float::with_val(wp, &two_pi * n);
        let z = Complex::with_val(wp, Float::with_val(wp, &x * t0) * sign);
        let g = upper_gamma(s, &z, wp, branch)?;
        let pw = Complex::with_val(wp, s * Float::with_val(wp, x.ln_ref())).exp();
        let nm = Float::with_val(wp, Float::with_val(wp, n).pow(m));
        acc += Complex::with_val(wp, &e * g) * nm / pw;
    }
    Ok(acc)
}

/// (s − m)_m = (s − m)(s − m + 1)⋯(s − 1).
fn pochhammer_below(s: &Complex, m: u32, wp: u32) -> Complex {
    let mut p = Complex::with_val(wp, 1);
    for j in 1..=m {
        p *= Complex::with_val(wp, s - j);
    }
    p
}

/// G_m(s, α, t₀) for Re α ∈ [−1/2, 1/2) and Im α ≠ t₀.
pub fn g_function(m: u32, s: &Complex, alpha: &Complex, t0: &Float, prec: u32, branch: &BranchConfig) -> Result<Complex> {
    if alpha.imag() == t0 {
        return Err(QmfError::CaseBoundary);
    }
    let wp = prec + 32;
    let s = Complex::with_val(wp, s);
    let t0 = Float::with_val(wp, t0);
    // a real part at rounding level is the symmetric case Re α = 0
    let on_axis = Float::with_val(64, alpha.real().abs_ref()) < Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    let alpha = if on_axis { Complex::with_val(wp, (0, alpha.imag())) } else { Complex::with_val(wp, alpha) };
    if *alpha.imag() < t0 {
        return Ok(Complex::with_val(prec, gamma_sum(m, &s, &alpha, &t0, true, wp, branch)?));
    }
    let mut g = -e_i_pi(&Complex::with_val(wp, m - &s), wp) * gamma_sum(m, &s, &alpha, &t0, false, wp, branch)?;
    let i_s = e_i_pi(&Complex::with_val(wp, &s / 2u32), wp);
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let two_pi_i_m = Complex::with_val(wp, (0, two_pi.clone())).pow_ref_u(m);
    let poch = pochhammer_below(&s, m, wp);
    let shift = Complex::with_val(wp, Float::with_val(wp, alpha.real().floor_ref()) + 1u32 - &alpha);
    let u = Complex::with_val(wp, 1u32 - &s) + m;
    if m == 0 {
        // t₀^s/s + i^s ζ(1−s, a) = (t₀^s − i^s)/s + i^s(ζ(1−s, a) + 1/s), entire at s = 0
        let lt = Complex::with_val(wp, Float::with_val(wp, t0.ln_ref()));
        let li = Complex::with_val(wp, (0, Float::with_val(wp, pi(wp) / 2u32)));
        let a = Complex::with_val(wp, &lt * phi(&Complex::with_val(wp, &s * &lt), wp));
        let b = Complex::with_val(wp, &li * phi(&Complex::with_val(wp, &s * &li), wp));
        g += a - b + Complex::with_val(wp, &i_s * hurwitz_zeta_regular(&u, &shift, wp)?);
    } else {
        let z = hurwitz_zeta(&u, &shift, wp)?;
        g += Complex::with_val(wp, &i_s * &poch) * z / &two_pi_i_m;
    }
    let q = Complex::with_val(wp, Complex::with_val(wp, (0, two_pi.clone())) * &alpha).exp();
    let li = polylog(&Complex::with_val(wp, &s - m), &q, wp)?;
    let pw = Complex::with_val(wp, Complex::with_val(wp, 1u32 - &s) * Float::with_val(wp, two_pi.ln_ref())).exp();
    let sign: i32 = if m % 2 == 1 { 1 } else { -1 };
    let r = rgamma(&Complex::with_val(wp, 1u32 - &s), wp);
    g += Complex::with_val(wp, (0, sign)) * pw * r * li;
    if on_axis {
        let e = Complex::with_val(wp, &s - (m + 1));
        let neg = Complex::with_val(wp, -&alpha);
        g += Complex::with_val(wp, &i_s * &poch) * cpow(&neg, &e, wp) / Complex::with_val(wp, &two_pi_i_m * 2u32);
    }
    Ok(Complex::with_val(prec, g))
}

trait PowU {
    fn pow_ref_u(&self, e: u32) -> Complex;
}

impl PowU for Complex {
    fn pow_ref_u(&self, e: u32) -> Complex {
        let mut p = Complex::with_val(self.prec().0, 1);
        for _ in 0..e {
            p *= self;
        }
        p
    }
}
