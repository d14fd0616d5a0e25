//! Λ(f, s) and L(f, s) from the explicit formula, with a term breakdown.

use super::context::{LContext, Piece};
use super::g::g_function;
use crate::error::{QmfError, Result};
use crate::numeric::complex_json;
use crate::poles::tilde::weight;
use crate::specfun::{abs, phi, pi, rgamma, upper_gamma};
use rug::{Complex, Float};
use std::collections::BTreeMap;

/// One principal-part contribution (−2πi)^m/(m−1)!·c(m)·G_{m−1}(σ, α, T).
#[derive(Clone, Debug)]
pub struct PoleTerm {
    pub piece: usize,
    pub alpha: Complex,
    pub m: u32,
    pub value: Complex,
}

/// Contributions to Λ(f, s) grouped by origin; all include the piece factor.
#[derive(Clone, Debug, Default)]
pub struct Terms {
    /// −c·ã(0)(T^σ − 1)/σ per piece.
    pub constant: Vec<Complex>,
    /// R/(s − n) at the poles n of Λ.
    pub polar: Vec<(i64, Complex)>,
    /// c·Σ_{n≠0} ã(n)Γ(σ, 2πnT)/(2πn)^σ per piece.
    pub gamma: Vec<Complex>,
    pub poles: Vec<PoleTerm>,
}

#[derive(Clone, Debug)]
pub struct LValueReport {
    pub s: Complex,
    pub t0: Float,
    pub lambda: Complex,
    pub l: Complex,
    pub labels: Vec<String>,
    pub terms: Terms,
    pub err: f64,
}

impl LValueReport {
    pub fn to_json(&self) -> serde_json::Value {
        let per_piece = |v: &[Complex]| -> serde_json::Value {
            self.labels.iter().zip(v).map(|(k, z)| (k.clone(), complex_json(z))).collect::<serde_json::Map<_, _>>().into()
        };
        let poles: Vec<_> = self
            .terms
            .poles
            .iter()
            .map(|p| serde_json::json!({"piece": self.labels[p.piece], "alpha": complex_json(&p.alpha), "m": p.m, "value": complex_json(&p.value)}))
            .collect();
        let polar: Vec<_> = self.terms.polar.iter().map(|(n, v)| serde_json::json!({"pole": n, "value": complex_json(v)})).collect();
        serde_json::json!({
            "s": complex_json(&self.s),
            "t0": crate::numeric::float_decimal(&self.t0),
            "lambda": complex_json(&self.lambda),
            "l": complex_json(&self.l),
            "terms": {"constant": per_piece(&self.terms.constant), "polar": polar, "gamma": per_piece(&self.terms.gamma), "poles": poles},
            "err": self.err,
        })
    }
}

impl Piece {
    pub fn label(&self) -> String {
        if self.sign > 0 {
            "f@t0".into()
        } else {
            format!("f{}@1/t0", self.r)
        }
    }
}

/// Σ_{n≠0} ã(n)Γ(σ, 2πnT)/(2πn)^σ and a bound for the dropped tail.
fn gamma_sum(p: &Piece, sigma: &Complex, wp: u32, ctx: &LContext) -> Result<(Complex, f64)> {
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let top = p.tilde.trunc();
    let mut acc = Complex::new(wp);
    let mut last = 0.0f64;
    for n in p.tilde.n_min()..=top {
        let a = p.tilde.coeff(n);
        if n == 0 || a.is_zero() {
            continue;
        }
        let rate = Complex::with_val(wp, Float::with_val(wp, &two_pi * n));
        let z = Complex::with_val(wp, &rate * &p.height);
        let g = upper_gamma(sigma, &z, wp, &ctx.branch)?;
        let pw = Complex::with_val(wp, ctx.branch.ln(&rate)? * sigma).exp();
        let term = Complex::with_val(wp, a * g) / pw;
        if n > top - 4 {
            last = last.max(abs(&term));
        }
        acc += term;
    }
    // terms beyond N decay at least geometrically once past the last pole height
    Ok((acc, 4.0 * last))
}

/// Σ over the subtracted poles of (−2πi)^m/(m−1)!·c(m)·G_{m−1}(σ, α, T).
fn pole_terms(idx: usize, p: &Piece, sigma: &Complex, wp: u32, ctx: &LContext) -> Result<Vec<PoleTerm>> {
    let mut out = Vec::new();
    for rec in p.tilde.poles() {
        for m in 1..=rec.order {
            let c = Complex::with_val(wp, rec.coeff(m));
            let g = g_function(m - 1, sigma, &rec.alpha, &p.height, wp, &ctx.branch)?;
            let value = Complex::with_val(wp, weight(m, wp) * c) * g * &p.factor;
            out.push(PoleTerm { piece: idx, alpha: Complex::with_val(ctx.prec, &rec.alpha), m, value });
        }
    }
    Ok(out)
}

/// Residues R_n = −sign·c·ã(0) of the constant terms, merged by pole position n.
fn residues(ctx: &LContext, wp: u32) -> BTreeMap<i64, Complex> {
    let mut out: BTreeMap<i64, Complex> = BTreeMap::new();
    for p in &ctx.pieces {
        let a0 = Complex::with_val(wp, p.tilde.coeff(0) * &p.factor);
        let e = out.entry(p.pole_at()).or_insert_with(|| Complex::new(wp));
        *e -= a0 * p.sign;
    }
    // exact cancellation (such as −a(0) + a(0) in weight 0) leaves rounding noise
    let floor = Float::with_val(64, Float::i_exp(1, 16 - ctx.prec as i32));
    out.retain(|_, r| Float::with_val(64, r.abs_ref()) > floor);
    out
}

/// The residue of Λ(f, s) at the integer n.
pub fn residue(ctx: &LContext, n: i64) -> Result<Complex> {
    let k = ctx.weight;
    if n != 0 && !(k - ctx.depth as i64 <= n && n <= k) {
        return Err(QmfError::NotAPole(n));
    }
    let wp = ctx.prec + 32;
    Ok(residues(ctx, wp).remove(&n).map(|r| Complex::with_val(ctx.prec, r)).unwrap_or_else(|| Complex::new(ctx.prec)))
}

fn near_pole(ctx: &LContext, s: &Complex, wp: u32) -> Option<(i64, Complex)> {
    let radius = 2f64.powi(-(ctx.prec as i32) / 2);
    residues(ctx, wp).into_iter().find(|(n, _)| abs(&Complex::with_val(wp, s - *n)) < radius)
}

/// Λ(f, s) with its breakdown; L(f, s) = (2π)^s/Γ(s)·Λ(f, s).
pub fn lambda(ctx: &LContext, s: &Complex) -> Result<LValueReport> {
    let wp = ctx.prec + 32;
    let s = Complex::with_val(wp, s);
    if let Some((n, r)) = near_pole(ctx, &s, wp) {
        let r = Complex::with_val(ctx.prec, r);
        return Err(QmfError::NearPole {
            pole: n,
            residue_re: crate::numeric::float_decimal(r.real()),
            residue_im: crate::numeric::float_decimal(r.imag()),
        });
    }
    let mut terms = Terms::default();
    let mut total = Complex::new(wp);
    let mut tail = 0.0f64;
    let mut size = 0.0f64;
    for (idx, p) in ctx.pieces.iter().enumerate() {
        let sigma = p.sigma(&s, wp);
        let lt = Complex::with_val(wp, Float::with_val(wp, p.height.ln_ref()));
        let sl = Complex::with_val(wp, &sigma * &lt);
        let c0 = Complex::with_val(wp, p.tilde.coeff(0) * &p.factor);
        let constant = -c0 * lt * phi(&sl, wp);
        let (gs, t) = gamma_sum(p, &sigma, wp, ctx)?;
        let gs = gs * &p.factor;
        tail += t * abs(&p.factor);
        for v in [&constant, &gs] {
            size = size.max(abs(v));
            total += v;
        }
        for pt in pole_terms(idx, p, &sigma, wp, ctx)? {
            size = size.max(abs(&pt.value));
            total += &pt.value;
            terms.poles.push(pt);
        }
        terms.constant.push(constant);
        terms.gamma.push(gs);
    }
    for (n, r) in residues(ctx, wp) {
        let v = r / Complex::with_val(wp, &s - n);
        size = size.max(abs(&v));
        total += &v;
        terms.polar.push((n, v));
    }
    let rounding = size * 2f64.powi(24 - ctx.prec as i32);
    let l = dirichlet_factor(&s, wp) * &total;
    let scale = abs(&dirichlet_factor(&s, wp));
    let round = |z: Complex| Complex::with_val(ctx.prec, z);
    Ok(LValueReport {
        s: round(s),
        t0: ctx.t0.clone(),
        lambda: round(total),
        l: round(l),
        labels: ctx.pieces.iter().map(|p| p.label()).collect(),
        terms: Terms {
            constant: terms.constant.into_iter().map(round).collect(),
            polar: terms.polar.into_iter().map(|(n, v)| (n, round(v))).collect(),
            gamma: terms.gamma.into_iter().map(round).collect(),
            poles: terms.poles.into_iter().map(|p| PoleTerm { value: round(p.value), ..p }).collect(),
        },
        err: (tail + rounding) * scale.max(1.0),
    })
}

/// (2π)^s/Γ(s).
fn dirichlet_factor(s: &Complex, wp: u32) -> Complex {
    let l2p = Float::with_val(wp, pi(wp) * 2u32).ln();
    Complex::with_val(wp, s * l2p).exp() * rgamma(s, wp)
}

/// L(f, s); at a pole n ≤ 0 of Λ the zero of 1/Γ gives the finite limit (2π)^n(−1)^n|n|!·R_n.
pub fn dirichlet_l(ctx: &LContext, s: &Complex) -> Result<Complex> {
    match lambda(ctx, s) {
        Ok(r) => Ok(r.l),
        Err(QmfError::NearPole { pole, .. }) if pole <= 0 => {
            let wp = ctx.prec + 32;
            let r = residue(ctx, pole)?;
            let fact = Float::with_val(wp, Float::factorial((-pole) as u32));
            let two_pi = Float::with_val(wp, pi(wp) * 2u32);
            let pw = Float::with_val(wp, rug::ops::Pow::pow(two_pi, pole as i32));
            let sign = if pole % 2 == 0 { 1 } else { -1 };
            Ok(Complex::with_val(ctx.prec, r * fact * pw * sign))
        }
        Err(e) => Err(e),
    }
}
