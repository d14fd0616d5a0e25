//! Quasi-modular forms Σ gᵢ E₂ⁱ with meromorphic modular coefficients.

use super::modular::ModularFn;
use crate::arith::binom;
use crate::error::{QmfError, Result};
use crate::numeric::{eisenstein_values, EisValues};
use crate::qseries::{eisenstein, QSeries};
use crate::scalar::ScalarPi;
use rug::{Complex, Rational};
use std::fmt;

/// f = Σ_{i=0}^{p} gᵢ E₂ⁱ of weight k, with gᵢ of weight k − 2i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiForm {
    weight: i64,
    parts: Vec<ModularFn>,
}

impl QuasiForm {
    /// Checks part weights and trims vanishing top parts.
    pub fn new(parts: Vec<ModularFn>, k: i64) -> Result<Self> {
        for (i, g) in parts.iter().enumerate() {
            let w = k - 2 * i as i64;
            if !g.is_zero() && g.weight() != w {
                return Err(QmfError::HeterogeneousWeight(w, g.weight()));
            }
        }
        Ok(Self::from_parts_unchecked(parts, k))
    }

    fn from_parts_unchecked(mut parts: Vec<ModularFn>, k: i64) -> Self {
        while parts.last().is_some_and(|g| g.is_zero()) {
            parts.pop();
        }
        let parts = parts
            .into_iter()
            .enumerate()
            .map(|(i, g)| if g.is_zero() { ModularFn::zero(k - 2 * i as i64) } else { g })
            .collect();
        QuasiForm { weight: k, parts }
    }

    pub fn zero(k: i64) -> Self {
        QuasiForm { weight: k, parts: Vec::new() }
    }

    pub fn from_modular(g: ModularFn) -> Self {
        let k = g.weight();
        Self::from_parts_unchecked(vec![g], k)
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::from_modular(ModularFn::constant(c))
    }

    pub fn e2() -> Self {
        Self::from_parts_unchecked(vec![ModularFn::zero(2), ModularFn::one()], 2)
    }

    pub fn e4() -> Self {
        Self::from_modular(ModularFn::e4())
    }

    pub fn e6() -> Self {
        Self::from_modular(ModularFn::e6())
    }

    pub fn delta() -> Self {
        Self::from_modular(ModularFn::delta())
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Top E₂-degree (0 for modular forms and for zero).
    pub fn depth(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_modular(&self) -> bool {
        self.parts.len() <= 1
    }

    pub fn parts(&self) -> &[ModularFn] {
        &self.parts
    }

    /// gᵢ, zero beyond the depth.
    pub fn part(&self, i: usize) -> ModularFn {
        self.parts.get(i).cloned().unwrap_or_else(|| ModularFn::zero(self.weight - 2 * i as i64))
    }

    /// The depth-0 coefficient as a modular function, if the form is modular.
    pub fn as_modular(&self) -> Option<ModularFn> {
        if self.is_modular() {
            Some(self.part(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.weight != o.weight {
            return Err(QmfError::HeterogeneousWeight(self.weight, o.weight));
        }
        let n = self.parts.len().max(o.parts.len());
        let parts = (0..n)
            .map(|i| self.part(i).add(&o.part(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts_unchecked(parts, self.weight))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QuasiForm { weight: self.weight, parts: self.parts.iter().map(|g| g.neg()).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_parts_unchecked(self.parts.iter().map(|g| g.scale(c)).collect(), self.weight)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.weight + o.weight;
        if self.is_zero() || o.is_zero() {
            return Self::zero(k);
        }
        let n = self.parts.len() + o.parts.len() - 1;
        let mut parts: Vec<ModularFn> = (0..n).map(|i| ModularFn::zero(k - 2 * i as i64)).collect();
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in o.parts.iter().enumerate() {
                parts[i + j] = parts[i + j].add(&a.mul(b)).expect("weights agree");
            }
        }
        Self::from_parts_unchecked(parts, k)
    }

    pub fn mul_modular(&self, g: &ModularFn) -> Self {
        Self::from_parts_unchecked(
            self.parts.iter().map(|p| p.mul(g)).collect(),
            self.weight + g.weight(),
        )
    }

    /// Division, allowed only by a nonzero form of depth 0.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let g = o.as_modular().ok_or(QmfError::DivisionByQuasi)?;
        if g.is_zero() {
            return Err(QmfError::DivisionByZero);
        }
        Ok(self.mul_modular(&g.recip()?))
    }

    /// Integer powers; negative exponents require depth 0.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let g = self.as_modular().ok_or(QmfError::DivisionByQuasi)?;
            if g.is_zero() {
                return Err(QmfError::DivisionByZero);
            }
            return Ok(Self::from_modular(g.pow(e)));
        }
        let mut r = Self::constant(1);
        for _ in 0..e {
            r = r.mul(self);
        }
        Ok(r)
    }

    /// D = q d/dq, through the Ramanujan system:
    /// D(gE₂ⁱ) = ϑg·E₂ⁱ + (w+i)/12·g·E₂^{i+1} − (i/12)·E₄g·E₂^{i−1}.
    pub fn d(&self) -> Self {
        let k = self.weight + 2;
        let n = self.parts.len() + 1;
        let mut parts: Vec<ModularFn> = (0..n).map(|i| ModularFn::zero(k - 2 * i as i64)).collect();
        let e4 = ModularFn::e4();
        for (i, g) in self.parts.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let w = self.weight - 2 * i as i64;
            parts[i] = parts[i].add(&g.serre()).unwrap();
            let up = g.scale(&Rational::from((w + i as i64, 12)));
            parts[i + 1] = parts[i + 1].add(&up).unwrap();
            if i > 0 {
                let down = g.mul(&e4).scale(&Rational::from((-(i as i64), 12)));
                parts[i - 1] = parts[i - 1].add(&down).unwrap();
            }
        }
        Self::from_parts_unchecked(parts, k)
    }

    pub fn d_pow(&self, n: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.d();
        }
        f
    }

    /// ϑ_{k,p} f = Df − (k − p)/12·E₂f, which preserves depth.
    pub fn serre(&self) -> Self {
        let c = Rational::from((self.weight - self.depth() as i64, 12));
        self.d().sub(&Self::e2().mul(self).scale(&c)).unwrap()
    }

    /// f_r = (6/πi)^r Σ_{i≥r} C(i,r) gᵢ E₂^{i−r}, for r = 0..p.
    pub fn components(&self) -> Vec<(ScalarPi, QuasiForm)> {
        let p = self.depth();
        (0..=p)
            .map(|r| {
                let parts = (r..self.parts.len())
                    .map(|i| self.parts[i].scale(&Rational::from(binom(i as i64, r as i64))))
                    .collect();
                let f = Self::from_parts_unchecked(parts, self.weight - 2 * r as i64);
                (ScalarPi::six_over_pi_i(r as u32), f)
            })
            .collect()
    }

    /// q-expansion known through q^n.
    pub fn qexp(&self, n: i64) -> QSeries {
        if self.is_zero() {
            return QSeries::zero(n);
        }
        let mut m = n;
        loop {
            let s = self.qexp_at(m);
            if s.trunc() >= n {
                return s.truncate(n);
            }
            m += n - s.trunc();
        }
    }

    fn qexp_at(&self, m: i64) -> QSeries {
        let e2 = eisenstein(2, m).unwrap();
        let mut acc = QSeries::zero(m);
        let mut e2p = QSeries::one(m);
        for g in &self.parts {
            if !g.is_zero() {
                acc = &acc + &(&g.qexp(m) * &e2p);
            }
            e2p = &e2p * &e2;
        }
        acc
    }

    pub fn eval_with(&self, v: &EisValues, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for g in self.parts.iter().rev() {
            acc *= &v.e2;
            acc += g.eval(v, prec);
        }
        acc
    }

    pub fn eval(&self, tau: &Complex, prec: u32) -> Complex {
        self.eval_with(&eisenstein_values(tau, prec), prec)
    }
}

impl fmt::Display for QuasiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<String> = Vec::new();
        for (i, g) in self.parts.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let gs = g.to_string();
            let e2 = match i {
                0 => String::new(),
                1 => "E2".to_string(),
                _ => format!("E2^{i}"),
            };
            terms.push(match (i, gs.as_str()) {
                (0, _) => gs,
                (_, "1") => e2,
                (_, "-1") => format!("-{e2}"),
                _ => format!("({gs})*{e2}"),
            });
        }
        let mut out = String::new();
        for (n, t) in terms.iter().enumerate() {
            if n == 0 {
                out.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        write!(f, "{out}")
    }
}
