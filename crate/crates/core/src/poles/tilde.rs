//! f̃ = f − Σ P_α(f): the expansion left after removing strip poles as polylogarithms.

use super::PoleRecord;
use crate::error::{QmfError, Result};
use crate::forms::QuasiForm;
use crate::qseries::{q_of, QSeries};
use crate::specfun::{pi, polylog_neg_int};
use rug::ops::Pow;
use rug::{Complex, Float};

/// ã(n) for n_min ≤ n ≤ N, valid on Im τ ≥ t₀, with the poles that were subtracted.
#[derive(Clone, Debug)]
pub struct TildeExpansion {
    t0: f64,
    n_min: i64,
    coeffs: Vec<Complex>,
    poles: Vec<PoleRecord>,
}

impl TildeExpansion {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn trunc(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn poles(&self) -> &[PoleRecord] {
        &self.poles
    }

    /// ã(n), zero outside the stored range below N.
    pub fn coeff(&self, n: i64) -> Complex {
        let prec = self.coeffs[0].prec().0;
        if n < self.n_min || n > self.trunc() {
            return Complex::new(prec);
        }
        self.coeffs[(n - self.n_min) as usize].clone()
    }

    /// Σ ã(n) qⁿ over the stored range.
    pub fn eval(&self, tau: &Complex, prec: u32) -> Complex {
        let q = q_of(tau, prec + 16);
        let mut acc = Complex::new(prec + 16);
        for c in self.coeffs.iter().rev() {
            acc *= &q;
            acc += c;
        }
        let lead = q.pow(self.n_min as i32);
        Complex::with_val(prec, acc * lead)
    }
}

/// (−2πi)^m/(m−1)! for m ≥ 1.
pub(crate) fn weight(m: u32, prec: u32) -> Complex {
    let mut w = Complex::with_val(prec, 1);
    let step = Complex::with_val(prec, (0, -pi(prec) * 2u32));
    for j in 1..=m {
        w *= &step;
        if j < m {
            w /= j;
        }
    }
    w
}

/// n-th Fourier coefficient of P_α(f): Σ_m (−2πi)^m/(m−1)! c(m) n^{m−1} e^{−2πinα}.
fn pole_coeff(rec: &PoleRecord, n: i64, prec: u32) -> Complex {
    let arg = Complex::with_val(prec, &rec.alpha * Complex::with_val(prec, (0, -pi(prec) * 2u32))) * n;
    let e = arg.exp();
    let mut acc = Complex::new(prec);
    let mut np = Float::with_val(prec, 1);
    for m in 1..=rec.order {
        acc += weight(m, prec) * Complex::with_val(prec, &rec.coeffs[m as usize - 1]) * &np;
        np *= n;
    }
    acc * e
}

/// Predicted a(n) from the strip poles alone; error O(e^{2πn t₀}).
pub fn coefficient_asymptotics(records: &[PoleRecord], n: i64, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    if n >= 1 {
        for r in records {
            acc += pole_coeff(r, n, prec);
        }
    }
    acc
}

/// P_α(f)(τ) = Σ_m (−2πi)^m/(m−1)! c(m) Li_{1−m}(e(τ − α)).
pub fn polylog_part(rec: &PoleRecord, tau: &Complex, prec: u32) -> Complex {
    let two_pi_i = Complex::with_val(prec, (0, pi(prec) * 2u32));
    let z = Complex::with_val(prec, Complex::with_val(prec, tau - &rec.alpha) * two_pi_i).exp();
    let one_minus = Complex::with_val(prec, 1 - &z);
    let mut acc = Complex::new(prec);
    let mut den = Complex::with_val(prec, 1);
    for m in 1..=rec.order {
        den *= &one_minus;
        let li = polylog_neg_int(m - 1).eval_complex(&z) / &den;
        acc += weight(m, prec) * Complex::with_val(prec, &rec.coeffs[m as usize - 1]) * li;
    }
    acc
}

/// Bits lost when a(n) of size e^{2πn Im α} cancels down to e^{2πn t₀}.
pub fn cancellation_bits(series: &QSeries, t0: f64) -> u32 {
    let rate = 2.0 * std::f64::consts::PI * t0 / std::f64::consts::LN_2;
    (1..=series.trunc())
        .filter_map(|n| series.coeff(n).filter(|c| *c != 0).map(|c| Float::with_val(64, &c).abs().log2().to_f64() - rate * n as f64))
        .fold(0.0f64, f64::max)
        .ceil() as u32
}

/// Whether |ã(n)|e^{−2πn t₀} grows over the upper half of the range while
/// standing above the rounding floor left by the subtraction.
fn grows_past_floor(coeffs: &[Complex], n_min: i64, t0: f64, prec: u32) -> Option<f64> {
    let top = n_min + coeffs.len() as i64 - 1;
    if top < 16 {
        return None;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    // ln of the normalized size |ã(n)| e^{−2πn t₀}
    let nu = |n: i64| -> Option<f64> {
        let a = Float::with_val(64, coeffs[(n - n_min) as usize].abs_ref());
        (!a.is_zero()).then(|| a.ln().to_f64() - two_pi * n as f64 * t0)
    };
    let w = (top / 8).max(2);
    let window = |hi: i64| (hi - w + 1..=hi).filter(|&n| n >= 1).filter_map(|n| nu(n).map(|v| (v, n))).max_by(|x, y| x.0.total_cmp(&y.0));
    let base = (1..=top / 4).filter_map(nu).fold(0.0f64, f64::max);
    let floor = base - prec as f64 / 2.0 * std::f64::consts::LN_2;
    let (l1, n1) = window(top / 2)?;
    let (l2, n2) = window(top)?;
    (n2 != n1 && l2 > floor).then(|| t0 + (l2 - l1) / (two_pi * (n2 - n1) as f64))
}

/// ã(n) = a(n) − Σ (poles' n-th coefficient) for 1 ≤ n ≤ N, used on Im τ ≥ t₀.
///
/// Every record is subtracted, including poles below t₀: f̃ then converges
/// down to the highest pole left out. Records must carry `prec + cancellation_bits` bits for ã to keep `prec` bits.
pub fn tilde_expansion(f: &QuasiForm, records: &[PoleRecord], t0: f64, n: i64, prec: u32) -> Result<TildeExpansion> {
    let series = f.qexp(n);
    let poles = records.to_vec();
    let loss = if poles.is_empty() { 0 } else { cancellation_bits(&series, t0) };
    let wp = prec + loss + 16;
    if let Some(r) = poles.iter().find(|r| r.prec < prec + loss) {
        return Err(QmfError::Inapplicable(format!("pole records carry {} bits, {} needed", r.prec, prec + loss)));
    }
    let n_min = series.n_min().min(0);
    let mut coeffs = Vec::with_capacity((n - n_min + 1) as usize);
    for k in n_min..=n {
        let a = series.coeff(k).unwrap_or_default();
        let mut c = Complex::with_val(wp, &a);
        if k >= 1 {
            for r in &poles {
                c -= pole_coeff(r, k, wp);
            }
        }
        coeffs.push(Complex::with_val(prec, c));
    }
    if let Some(g) = grows_past_floor(&coeffs, n_min, t0, prec) {
        if g > t0 + 0.02 {
            return Err(QmfError::MissingPole(format!("coefficients of f̃ grow like e^(2πn·{g:.3}) above t0 = {t0}")));
        }
    }
    Ok(TildeExpansion { t0, n_min, coeffs, poles })
}

/// f(τ) − Σ P_α(f)(τ) evaluated in closed form, for checking the expansion.
pub fn tilde_direct(f: &QuasiForm, poles: &[PoleRecord], tau: &Complex, prec: u32) -> Complex {
    let mut v = f.eval(tau, prec);
    for r in poles {
        v -= polylog_part(r, tau, prec);
    }
    v
}
