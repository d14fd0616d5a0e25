//! Numerical checks of the functional equations, the shift law and the residues.

use super::context::{i_pow, LConfig, LContext};
use super::lambda::{dirichlet_l, lambda};
use crate::arith::binom;
use crate::error::Result;
use crate::forms::QuasiForm;
use crate::specfun::{abs, pi};
use rug::{Complex, Float};

/// max over s of |Λ(f_m, s) − Σ_r i^{k−2m−r}C(m+r, r)Λ(f_{m+r}, k−2m−r−s)|.
pub fn verify_functional_equation(f: &QuasiForm, m: usize, samples: &[Complex], cfg: &LConfig) -> Result<f64> {
    let comps = f.components();
    if m >= comps.len() {
        return Ok(0.0);
    }
    let wp = cfg.prec + 32;
    let k = f.weight();
    let ctxs = comps[m..].iter().map(|(_, g)| LContext::new(g, cfg)).collect::<Result<Vec<_>>>()?;
    let scalars: Vec<Complex> = comps[m..].iter().map(|(c, _)| c.to_complex(wp)).collect();
    let mut worst = 0.0f64;
    for s in samples {
        let lhs = Complex::with_val(wp, &scalars[0] * lambda(&ctxs[0], s)?.lambda);
        let mut rhs = Complex::new(wp);
        for (r, (ctx, c)) in ctxs.iter().zip(&scalars).enumerate() {
            let e = k - 2 * m as i64 - r as i64;
            let arg = Complex::with_val(wp, e - Complex::with_val(wp, s));
            let coef = Complex::with_val(wp, i_pow(e, wp) * c) * binom((m + r) as i64, r as i64);
            rhs += coef * lambda(ctx, &arg)?.lambda;
        }
        worst = worst.max(abs(&Complex::with_val(wp, lhs - rhs)));
    }
    Ok(worst)
}

/// max over s of the residuals of Λ(D^l f, s) = (s−l)_l/(2π)^l·Λ(f, s−l) and L(D^l f, s) = L(f, s−l).
pub fn verify_shift(f: &QuasiForm, l: u32, samples: &[Complex], cfg: &LConfig) -> Result<f64> {
    let wp = cfg.prec + 32;
    let base = LContext::new(f, cfg)?;
    let shifted = LContext::new(&f.d_pow(l), cfg)?;
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let mut worst = 0.0f64;
    for s in samples {
        let s = Complex::with_val(wp, s);
        let back = Complex::with_val(wp, &s - l);
        let mut poch = Complex::with_val(wp, 1);
        for j in 0..l {
            poch *= Complex::with_val(wp, &back + j);
        }
        let scale = Float::with_val(wp, rug::ops::Pow::pow(&two_pi, l));
        let want = poch / scale * lambda(&base, &back)?.lambda;
        let got = lambda(&shifted, &s)?.lambda;
        worst = worst.max(abs(&Complex::with_val(wp, got - want)));
        let dl = dirichlet_l(&shifted, &s)?;
        let fl = dirichlet_l(&base, &back)?;
        worst = worst.max(abs(&Complex::with_val(wp, dl - fl)));
    }
    Ok(worst)
}

/// (1/2πi)∮ Λ(f, s) ds on |s − n| = radius by the trapezoid rule.
pub fn residue_by_contour(ctx: &LContext, n: i64, radius: f64, nodes: u32) -> Result<Complex> {
    let wp = ctx.prec + 32;
    let r = Float::with_val(wp, radius);
    let mut acc = Complex::new(wp);
    for j in 0..nodes {
        let theta = Float::with_val(wp, pi(wp) * 2u32) * j / nodes;
        let w = Complex::with_val(wp, (theta.clone().cos(), theta.sin())) * &r;
        let s = Complex::with_val(wp, &w + n);
        acc += lambda(ctx, &s)?.lambda * w;
    }
    Ok(Complex::with_val(ctx.prec, acc / nodes))
}
