//! Truncated Fourier–Laurent series in q with exact rational coefficients.

use crate::arith::{bernoulli, sigma};
use crate::error::{QmfError, Result};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ_{n=n_min}^{trunc} a(n) qⁿ`; coefficients above `trunc` are unknown, not zero.
///
/// Normal form: either `coeffs` is empty (the series is zero through `trunc`, and
/// `n_min = trunc + 1`) or `coeffs[0] != 0` and `coeffs.len() == trunc - n_min + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    n_min: i64,
    coeffs: Vec<Rational>,
    trunc: i64,
}

impl QSeries {
    /// Builds a series from coefficients starting at `n_min`, valid through `trunc`.
    /// Missing coefficients up to `trunc` are zero; extra ones are dropped.
    pub fn new(n_min: i64, mut coeffs: Vec<Rational>, trunc: i64) -> Self {
        let len = (trunc - n_min + 1).max(0) as usize;
        coeffs.resize(len, Rational::new());
        let mut s = QSeries { n_min, coeffs, trunc };
        s.normalize();
        s
    }

    /// Series whose truncation order is the last given coefficient.
    pub fn from_coeffs(n_min: i64, coeffs: Vec<Rational>) -> Self {
        let trunc = n_min + coeffs.len() as i64 - 1;
        Self::new(n_min, coeffs, trunc)
    }

    pub fn from_ints(n_min: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(n_min, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(trunc: i64) -> Self {
        QSeries { n_min: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn constant(c: impl Into<Rational>, trunc: i64) -> Self {
        Self::monomial(c, 0, trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::constant(1, trunc)
    }

    /// `c·qⁿ` known through `trunc`.
    pub fn monomial(c: impl Into<Rational>, n: i64, trunc: i64) -> Self {
        Self::new(n, vec![c.into()], trunc)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| *c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.n_min = self.trunc + 1;
            }
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.n_min += k as i64;
            }
        }
    }

    /// Lowest exponent with a nonzero coefficient (`trunc + 1` for the zero series).
    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// a(n), or `None` above the truncation order.
    pub fn coeff(&self, n: i64) -> Option<Rational> {
        if n > self.trunc {
            None
        } else if n < self.n_min {
            Some(Rational::new())
        } else {
            Some(self.coeffs[(n - self.n_min) as usize].clone())
        }
    }

    fn coeff_ref(&self, n: i64) -> Option<&Rational> {
        if n < self.n_min || n > self.trunc {
            None
        } else {
            Some(&self.coeffs[(n - self.n_min) as usize])
        }
    }

    /// Drops knowledge above `n`.
    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.trunc {
            return self.clone();
        }
        let keep = (n - self.n_min + 1).max(0) as usize;
        Self::new(self.n_min, self.coeffs[..keep.min(self.coeffs.len())].to_vec(), n)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.trunc);
        }
        QSeries {
            n_min: self.n_min,
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by q^m.
    pub fn shift(&self, m: i64) -> Self {
        QSeries { n_min: self.n_min + m, coeffs: self.coeffs.clone(), trunc: self.trunc + m }
    }

    fn add_impl(&self, other: &Self, sign: i32) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let lo = self.n_min.min(other.n_min);
        if lo > trunc {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![Rational::new(); (trunc - lo + 1) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let n = lo + i as i64;
            if let Some(a) = self.coeff_ref(n) {
                *c += a;
            }
            if let Some(b) = other.coeff_ref(n) {
                if sign > 0 {
                    *c += b;
                } else {
                    *c -= b;
                }
            }
        }
        Self::new(lo, coeffs, trunc)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let trunc = (self.n_min + other.trunc).min(other.n_min + self.trunc);
        let lo = self.n_min + other.n_min;
        if self.is_zero() || other.is_zero() || lo > trunc {
            return Self::zero(trunc);
        }
        let len = (trunc - lo + 1) as usize;
        let mut acc = vec![Rational::new(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                if *b != 0 {
                    acc[i + j] += Rational::from(a * b);
                }
            }
        }
        Self::new(lo, acc, trunc)
    }

    /// Multiplicative inverse; the truncation order becomes `trunc - 2 n_min`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QmfError::NotInvertible);
        }
        let v = self.n_min;
        let len = (self.trunc - v + 1) as usize;
        let inv0 = Rational::from(self.coeffs[0].recip_ref());
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(inv0.clone());
        for n in 1..len {
            let mut s = Rational::new();
            for j in 1..=n {
                let c = &self.coeffs[j];
                if *c != 0 {
                    s += Rational::from(c * &b[n - j]);
                }
            }
            b.push(-s * &inv0);
        }
        Ok(Self::new(-v, b, self.trunc - 2 * v))
    }

    /// Integer power; negative exponents invert first. `f⁰` is 1 known to the
    /// relative precision of `f`.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        if e == 0 {
            return Ok(Self::one((self.trunc - self.n_min).max(0)));
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => &r * &base,
                });
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result.unwrap())
    }

    /// D = q d/dq: a(n) ↦ n·a(n).
    pub fn d(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| Rational::from(a * (self.n_min + i as i64)))
            .collect();
        Self::new(self.n_min, coeffs, self.trunc)
    }

    pub fn d_pow(&self, n: u32) -> Self {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.d();
        }
        s
    }

    /// Numeric value at τ with an estimate of the truncation error.
    ///
    /// The tail estimate is geometric, extrapolated from the growth of the last
    /// stored coefficients, so it is only meaningful for Im τ above `floor`.
    pub fn evaluate(&self, tau: &Complex, prec: u32, floor: f64) -> Result<(Complex, f64)> {
        let im = tau.imag().to_f64();
        if im < floor {
            return Err(QmfError::PrecisionNotCertifiable { im, floor });
        }
        let wp = prec + 32;
        let q = q_of(tau, wp);
        let mut acc = Complex::new(wp);
        // Horner in q from the top, then multiply by q^n_min.
        for c in self.coeffs.iter().rev() {
            acc *= &q;
            acc += Float::with_val(wp, c);
        }
        if self.n_min != 0 {
            let qn = q.clone().pow(self.n_min as i32);
            acc *= qn;
        }
        Ok((Complex::with_val(prec, acc), self.tail_estimate(im)))
    }

    fn tail_estimate(&self, im: f64) -> f64 {
        let absq = (-2.0 * std::f64::consts::PI * im).exp();
        let n = self.trunc;
        let take = 8.min(self.coeffs.len());
        if take == 0 {
            return absq.powi((n + 1).clamp(-1000, 1000) as i32);
        }
        // log-size of the last coefficients gives a growth rate per index
        let logs: Vec<f64> = self.coeffs[self.coeffs.len() - take..]
            .iter()
            .map(|c| if *c == 0 { f64::NEG_INFINITY } else { rat_log_abs(c) })
            .collect();
        let last = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let rate = if take >= 2 && logs[0].is_finite() && logs[take - 1].is_finite() {
            ((logs[take - 1] - logs[0]) / (take - 1) as f64).max(0.0)
        } else {
            0.0
        };
        let ratio = rate.exp() * absq;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        (last + rate + (n + 1) as f64 * absq.ln()).exp() / (1.0 - ratio)
    }

    /// Text form such as `q^-1 + 24 + 324*q`.
    pub fn to_terms_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let n = self.n_min + i as i64;
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn rat_log_abs(c: &Rational) -> f64 {
    let f = Float::with_val(64, c);
    f.abs().ln().to_f64()
}

/// q = e^{2πiτ} at working precision `prec`.
pub fn q_of(tau: &Complex, prec: u32) -> Complex {
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let arg = Complex::with_val(prec, tau * &two_pi);
    let arg = Complex::with_val(prec, (-arg.imag().clone(), arg.real().clone()));
    arg.exp()
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.to_terms_string(), self.trunc + 1)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, 1)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, -1)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&Rational::from(-1))
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    n_min: i64,
    coeffs: Vec<(String, String)>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // the zero series is written from its truncation so the order round-trips
        let (n_min, coeffs) = if self.is_zero() {
            (self.trunc, vec![("0".to_string(), "1".to_string())])
        } else {
            (
                self.n_min,
                self.coeffs
                    .iter()
                    .map(|c| (c.numer().to_string(), c.denom().to_string()))
                    .collect(),
            )
        };
        QSeriesJson { n_min, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = QSeriesJson::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(j.coeffs.len());
        for (n, den) in &j.coeffs {
            let n: Integer = n.parse().map_err(D::Error::custom)?;
            let den: Integer = den.parse().map_err(D::Error::custom)?;
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(Rational::from((n, den)));
        }
        if coeffs.is_empty() {
            return Err(D::Error::custom("empty coefficient list"));
        }
        Ok(QSeries::from_coeffs(j.n_min, coeffs))
    }
}

/// E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ through q^N.
pub fn eisenstein(k: i64, n: i64) -> Result<QSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(QmfError::InvalidWeight(k));
    }
    let factor = Rational::from(-2 * k) / bernoulli(k as usize);
    let mut coeffs = Vec::with_capacity(n.max(0) as usize + 1);
    coeffs.push(Rational::from(1));
    for m in 1..=n {
        coeffs.push(Rational::from(sigma((k - 1) as u32, m as u64)) * &factor);
    }
    Ok(QSeries::new(0, coeffs, n))
}

/// Δ = q Π(1 − qⁿ)²⁴ through q^N, via the pentagonal number theorem.
pub fn delta_series(n: i64) -> QSeries {
    if n < 1 {
        return QSeries::zero(n);
    }
    let top = n - 1;
    let mut eta = vec![Rational::new(); top as usize + 1];
    let mut k = 0i64;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if e <= top {
                eta[e as usize] = Rational::from(if kk % 2 == 0 { 1 } else { -1 });
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    let p = QSeries::new(0, eta, top);
    p.pow(24).expect("nonnegative power").shift(1)
}
