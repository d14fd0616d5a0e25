use super::{abs, as_integer, cpow, eps, gamma, near_nonpositive_int, pi, rgamma, BranchConfig};
use crate::error::{QmfError, Result};
use rug::{Complex, Float, Integer};

fn is_small(t: &Complex, tol: &Float) -> bool {
    Float::with_val(64, t.abs_ref()) < *tol
}

fn asymptotic_threshold(s: &Complex, wp: u32) -> f64 {
    0.75 * wp as f64 + 2.0 * abs(s) + 10.0
}

/// Γ(s,z) ~ z^{s−1}e^{−z} Σ_k (s−1)(s−2)…(s−k)/z^k.
fn upper_asymptotic(s: &Complex, z: &Complex, wp: u32) -> Complex {
    let tol = eps(wp + 8);
    let mut term = Complex::with_val(wp, 1);
    let mut sum = Complex::with_val(wp, 1);
    let mut last = f64::INFINITY;
    for k in 1..(8 * wp as u64) {
        term *= Complex::with_val(wp, s - k);
        term /= z;
        let m = abs(&term);
        if m > last {
            break;
        }
        last = m;
        sum += &term;
        if is_small(&term, &tol) {
            break;
        }
    }
    let sm1 = Complex::with_val(wp, s - 1u32);
    cpow(z, &sm1, wp) * Complex::with_val(wp, -z).exp() * sum
}

/// γ(s,z) on the principal branch by convergent series.
fn lower_series(s: &Complex, z: &Complex, wp: u32) -> Complex {
    let tol = eps(wp + 8);
    let zs = cpow(z, s, wp);
    if z.real().is_sign_positive() {
        // Kummer: z^s e^{−z} Σ z^k / (s(s+1)…(s+k)), no cancellation for Re z > 0
        let mut term = Complex::with_val(wp, s.recip_ref());
        let mut sum = term.clone();
        for k in 1..(16 * wp as u64 + 8 * abs(z) as u64) {
            term *= z;
            term /= Complex::with_val(wp, s + k);
            sum += &term;
            if k as f64 > abs(z) && is_small(&term, &tol) && abs(&sum) > 0.0 {
                let rel = Float::with_val(64, term.abs_ref()) / Float::with_val(64, sum.abs_ref());
                if rel < tol {
                    break;
                }
            }
        }
        zs * Complex::with_val(wp, -z).exp() * sum
    } else {
        // z^s Σ (−z)^k / (k!(s+k)), all terms aligned for z on the negative axis
        let mz = Complex::with_val(wp, -z);
        let mut pw = Complex::with_val(wp, 1);
        let mut sum = Complex::with_val(wp, s.recip_ref());
        for k in 1..(16 * wp as u64 + 8 * abs(z) as u64) {
            pw *= &mz;
            pw /= k;
            let term = Complex::with_val(wp, &pw / Complex::with_val(wp, s + k));
            sum += &term;
            if k as f64 > abs(z) && is_small(&term, &tol) {
                let rel = Float::with_val(64, term.abs_ref()) / Float::with_val(64, sum.abs_ref());
                if rel < tol {
                    break;
                }
            }
        }
        zs * sum
    }
}

/// E₁(z) = Γ(0, z) on the principal branch.
pub fn e1(z: &Complex, prec: u32) -> Complex {
    let zero = Complex::new(prec);
    if abs(z) > asymptotic_threshold(&zero, prec + 32) {
        return Complex::with_val(prec, upper_asymptotic(&zero, z, prec + 32));
    }
    let wp = prec + 32 + (1.45 * (abs(z) + z.real().to_f64().max(0.0))) as u32;
    let z = Complex::with_val(wp, z);
    let tol = eps(wp + 8);
    let mut pw = Complex::with_val(wp, 1);
    let mut sum = Complex::new(wp);
    let mz = Complex::with_val(wp, -&z);
    for k in 1..(16 * wp as u64 + 8 * abs(&z) as u64) {
        pw *= &mz;
        pw /= k;
        let term = Complex::with_val(wp, &pw / k);
        sum += &term;
        if k as f64 > abs(&z) && is_small(&term, &tol) {
            break;
        }
    }
    let euler = Float::with_val(wp, rug::float::Constant::Euler);
    let lnz = Complex::with_val(wp, z.ln_ref());
    Complex::with_val(prec, -lnz - euler - sum)
}

/// Γ(−n, z) = ((−1)^n/n!)[E₁(z) − e^{−z} Σ_{k<n} (−1)^k k!/z^{k+1}].
fn upper_neg_int(n: u32, z: &Complex, prec: u32) -> Complex {
    let wp = prec + 32;
    let z = Complex::with_val(wp, z);
    let mut tail = Complex::new(wp);
    let mut zk = Complex::with_val(wp, z.recip_ref());
    for k in 0..n {
        let f = Integer::from(Integer::factorial(k));
        let t = Complex::with_val(wp, &zk * &f);
        if k % 2 == 0 {
            tail += t;
        } else {
            tail -= t;
        }
        zk /= &z;
    }
    let ez = Complex::with_val(wp, -&z).exp();
    let v = e1(&z, wp) - ez * tail;
    let f = Integer::from(Integer::factorial(n));
    let v = v / f;
    Complex::with_val(prec, if n % 2 == 0 { v } else { -v })
}

/// Principal-branch Γ(s,z), z ≠ 0.
fn upper_principal(s: &Complex, z: &Complex, prec: u32) -> Complex {
    let base = prec + 32;
    if abs(z) > asymptotic_threshold(s, base) {
        return Complex::with_val(prec, upper_asymptotic(s, &Complex::with_val(base, z), base));
    }
    let (d, n) = near_nonpositive_int(s);
    if d < 2f64.powi(-(base as i32)) || as_integer(s).is_some_and(|v| v <= 0) {
        return upper_neg_int((-n) as u32, z, prec);
    }
    let guard = 1.45 * (abs(z) + z.real().to_f64().max(0.0)) + if d < 1.0 { -d.log2() } else { 0.0 };
    let wp = base + guard as u32;
    let s = Complex::with_val(wp, s);
    let z = Complex::with_val(wp, z);
    let v = gamma(&s, wp) - lower_series(&s, &z, wp);
    Complex::with_val(prec, v)
}

/// Upper incomplete gamma Γ(s,z) with arg z taken in (θ − 2π, θ).
pub fn upper_gamma(s: &Complex, z: &Complex, prec: u32, branch: &BranchConfig) -> Result<Complex> {
    if z.is_zero() {
        if s.real().is_sign_positive() && !s.real().is_zero() {
            return Ok(gamma(s, prec));
        }
        return Err(QmfError::Inapplicable("Gamma(s, 0) with Re s <= 0".into()));
    }
    let m = branch.sheet(z)?;
    let wp = prec + 16;
    let g = upper_principal(s, z, wp);
    if m == 0 {
        return Ok(Complex::with_val(prec, g));
    }
    // Γ(s, ze^{2πi}) = e^{2πis}Γ(s,z) − 2i e^{iπs} π/Γ(1−s)
    let ipis = Complex::with_val(wp, s * Complex::with_val(wp, (0, pi(wp))));
    let e1s = Complex::with_val(wp, ipis.exp_ref());
    let e2s = Complex::with_val(wp, &e1s * &e1s);
    let one_minus = Complex::with_val(wp, 1 - s);
    let corr = Complex::with_val(wp, (0, -2)) * &e1s * pi(wp) * rgamma(&one_minus, wp);
    Ok(Complex::with_val(prec, e2s * g + corr))
}

/// Lower incomplete gamma γ(s,z) = Γ(s) − Γ(s,z), on the same branch.
pub fn lower_gamma(s: &Complex, z: &Complex, prec: u32, branch: &BranchConfig) -> Result<Complex> {
    let (d, _) = near_nonpositive_int(s);
    if d == 0.0 {
        return Err(QmfError::Inapplicable("lower gamma has a pole at nonpositive integer s".into()));
    }
    let m = branch.sheet(z)?;
    let wp = prec + 32;
    let g = if abs(z) <= 40.0 + prec as f64 / 4.0 {
        let guard = if d < 1.0 { -d.log2() as u32 } else { 0 } + (1.45 * z.real().to_f64().max(0.0).min(1e6)) as u32;
        let wq = wp + guard;
        lower_series(&Complex::with_val(wq, s), &Complex::with_val(wq, z), wq)
    } else {
        gamma(s, wp) - upper_principal(s, z, wp)
    };
    if m == 0 {
        return Ok(Complex::with_val(prec, g));
    }
    let ipis = Complex::with_val(wp, s * Complex::with_val(wp, (0, pi(wp) * 2u32)));
    Ok(Complex::with_val(prec, g * ipis.exp()))
}
