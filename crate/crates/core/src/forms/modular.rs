//! Meromorphic modular forms as E₄ᵃ E₆ᵇ · P(x)/Q(x) with x = E₄³/E₆².

use crate::error::{QmfError, Result};
use crate::numeric::EisValues;
use crate::poly::Poly;
use crate::qseries::{delta_series, eisenstein, QSeries};
use rug::ops::Pow;
use rug::{Complex, Rational};
use std::fmt;

/// A homogeneous element of ℚ(E₄, E₆).
///
/// Normal form: P, Q coprime, Q monic, neither divisible by x. The weight is
/// stored separately so that zero keeps its weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModularFn {
    weight: i64,
    a: i64,
    b: i64,
    p: Poly,
    q: Poly,
}

impl ModularFn {
    /// E₄ᵃ E₆ᵇ P(x)/Q(x), normalized.
    pub fn from_parts(a: i64, b: i64, p: Poly, q: Poly) -> Result<Self> {
        if q.is_zero() {
            return Err(QmfError::DivisionByZero);
        }
        let mut f = ModularFn { weight: 4 * a + 6 * b, a, b, p, q };
        f.normalize();
        Ok(f)
    }

    fn normalize(&mut self) {
        if self.p.is_zero() {
            self.a = 0;
            self.b = 0;
            self.q = Poly::one();
            return;
        }
        let g = Poly::gcd(&self.p, &self.q);
        if g.degree() > 0 {
            self.p = self.p.divrem(&g).0;
            self.q = self.q.divrem(&g).0;
        }
        let lead = self.q.lead();
        if lead != 1 {
            let inv = Rational::from(lead.recip_ref());
            self.p = self.p.scale(&inv);
            self.q = self.q.scale(&inv);
        }
        // x = E₄³/E₆² so x^e moves into the exponents
        let ep = self.p.x_valuation();
        if ep > 0 {
            self.p = self.p.unshift(ep);
            self.a += 3 * ep as i64;
            self.b -= 2 * ep as i64;
        }
        let eq = self.q.x_valuation();
        if eq > 0 {
            self.q = self.q.unshift(eq);
            self.a -= 3 * eq as i64;
            self.b += 2 * eq as i64;
        }
    }

    pub fn zero(weight: i64) -> Self {
        ModularFn { weight, a: 0, b: 0, p: Poly::zero(), q: Poly::one() }
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::from_parts(0, 0, Poly::constant(c), Poly::one()).unwrap()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn e4() -> Self {
        Self::from_parts(1, 0, Poly::one(), Poly::one()).unwrap()
    }

    pub fn e6() -> Self {
        Self::from_parts(0, 1, Poly::one(), Poly::one()).unwrap()
    }

    /// Δ = E₆²(x − 1)/1728.
    pub fn delta() -> Self {
        Self::from_parts(0, 2, Poly::linear(1).scale(&Rational::from((1, 1728))), Poly::one())
            .unwrap()
    }

    /// j = E₄³/Δ.
    pub fn j() -> Self {
        Self::e4().pow(3).div(&Self::delta()).unwrap()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// Exponents (a, b) and the polynomials P, Q of the normal form.
    pub fn parts(&self) -> (i64, i64, &Poly, &Poly) {
        (self.a, self.b, &self.p, &self.q)
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.a == 0 && self.b == 0 && self.p.degree() == 0 && self.q.degree() == 0)
    }

    /// The value of a weight-0 constant.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::new())
        } else if self.is_constant() {
            Some(self.p.coeff(0))
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        let mut f = self.clone();
        f.p = f.p.neg();
        f
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.weight);
        }
        let mut f = self.clone();
        f.p = f.p.scale(c);
        f
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.weight != o.weight {
            return Err(QmfError::HeterogeneousWeight(self.weight, o.weight));
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        // a₁ − a₂ = 3t and b₂ − b₁ = 2t
        let (hi, lo) = if self.a >= o.a { (self, o) } else { (o, self) };
        let t = ((hi.a - lo.a) / 3) as usize;
        let num = hi.p.shift(t).mul(&lo.q).add(&lo.p.mul(&hi.q));
        let den = hi.q.mul(&lo.q);
        let mut f = Self::from_parts(lo.a, lo.b, num, den)?;
        f.weight = self.weight;
        Ok(f)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.weight + o.weight);
        }
        Self::from_parts(self.a + o.a, self.b + o.b, self.p.mul(&o.p), self.q.mul(&o.q)).unwrap()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QmfError::DivisionByZero);
        }
        Self::from_parts(-self.a, -self.b, self.q.clone(), self.p.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.recip().expect("nonzero base").pow(-e);
        }
        if self.is_zero() {
            return if e == 0 { Self::one() } else { Self::zero(self.weight * e) };
        }
        Self::from_parts(self.a * e, self.b * e, self.p.pow(e as u32), self.q.pow(e as u32)).unwrap()
    }

    /// Serre derivative ϑ_k f = Df − (k/12)E₂f, a modular form of weight k + 2.
    ///
    /// Uses ϑE₄ = −E₆/3, ϑE₆ = −E₄²/2 and ϑx = x(x − 1)E₆/E₄.
    pub fn serre(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.weight + 2);
        }
        let (p, q) = (&self.p, &self.q);
        let lin = Poly::new(vec![
            Rational::from((-self.a, 3)),
            Rational::from((-self.b, 2)),
        ]);
        let xx1 = Poly::new(vec![Rational::new(), Rational::from(-1), Rational::from(1)]);
        let wr = p.deriv().mul(q).sub(&p.mul(&q.deriv()));
        let num = lin.mul(p).mul(q).add(&xx1.mul(&wr));
        let den = q.mul(q);
        let mut f = Self::from_parts(self.a - 1, self.b + 1, num, den).unwrap();
        f.weight = self.weight + 2;
        f
    }

    /// Numerator and denominator as homogeneous polynomials in (E₄, E₆):
    /// f = E₄^{a} E₆^{b'} · P̂/Q̂ with P̂ = E₆^{2 deg P} P(E₄³/E₆²), likewise Q̂.
    fn homogeneous_shift(&self) -> i64 {
        self.b + 2 * self.q.degree().max(0) - 2 * self.p.degree().max(0)
    }

    /// q-expansion known through q^n.
    pub fn qexp(&self, n: i64) -> QSeries {
        if self.is_zero() {
            return QSeries::zero(n);
        }
        let mut slack = 4;
        loop {
            let m = n + slack;
            let s = self.qexp_at(m);
            if s.trunc() >= n {
                return s.truncate(n);
            }
            slack += (n - s.trunc()).max(4);
        }
    }

    fn qexp_at(&self, m: i64) -> QSeries {
        let e4 = eisenstein(4, m).unwrap();
        let e6 = eisenstein(6, m).unwrap();
        // E₆²(x − 1) = 1728Δ keeps cusp forms exact without cancellation
        let d1728 = delta_series(m).scale(&Rational::from(1728));
        let homog = |poly: &Poly| -> QSeries {
            let (mult, rest) = poly.split_x_minus_one();
            let d = rest.degree().max(0) as i64;
            let mut acc = QSeries::zero(m);
            let e4_3 = e4.pow(3).unwrap();
            let e6_2 = e6.pow(2).unwrap();
            for (i, c) in rest.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let term = &e4_3.pow(i as i64).unwrap() * &e6_2.pow(d - i as i64).unwrap();
                acc = &acc + &term.scale(c);
            }
            &acc * &d1728.pow(mult as i64).unwrap()
        };
        let num = homog(&self.p);
        let den = homog(&self.q);
        let b = self.homogeneous_shift();
        let pre = &e4.pow(self.a).unwrap() * &e6.pow(b).unwrap();
        &(&pre * &num) * &den.invert().expect("nonzero denominator")
    }

    /// Numeric value from values of E₄, E₆, Δ.
    pub fn eval(&self, v: &EisValues, prec: u32) -> Complex {
        if self.is_zero() {
            return Complex::new(prec);
        }
        let d1728 = Complex::with_val(prec, &v.delta * 1728u32);
        let e4_3 = Complex::with_val(prec, v.e4.clone().pow(3u32));
        let e6_2 = Complex::with_val(prec, v.e6.clone().pow(2u32));
        let homog = |poly: &Poly| -> Complex {
            let (mult, rest) = poly.split_x_minus_one();
            let h = rest.eval_homogeneous(&e4_3, &e6_2);
            h * Complex::with_val(prec, d1728.clone().pow(mult))
        };
        let num = homog(&self.p);
        let den = homog(&self.q);
        let b = self.homogeneous_shift();
        let pre = Complex::with_val(prec, v.e4.clone().pow(self.a as i32))
            * Complex::with_val(prec, v.e6.clone().pow(b as i32));
        pre * num / den
    }

    /// Exponents of E₄ and E₆ in the denominator and the part of Q other than
    /// (x − 1) factors: these are what produce poles in the upper half-plane.
    pub fn pole_data(&self) -> (i64, i64, Poly) {
        let (_, rest) = self.q.split_x_minus_one();
        let b = self.homogeneous_shift();
        ((-self.a).max(0), (-b).max(0), rest)
    }

    /// Monomials in (E₄, E₆, Δ⁻¹) for numerator and denominator, with the
    /// denominator `None` when it is 1.
    pub fn monomials(&self) -> (Vec<(Rational, i64, i64, i64)>, Option<Vec<(Rational, i64, i64, i64)>>) {
        if self.is_zero() {
            return (Vec::new(), None);
        }
        let (mq, rest_q) = self.q.split_x_minus_one();
        let (mp, rest_p) = self.p.split_x_minus_one();
        let b = self.homogeneous_shift();
        // P̂ = (1728Δ)^{mp} · Σ pᵢ E₄^{3i} E₆^{2(d−i)}, same for Q̂
        let mono = |poly: &Poly, a0: i64, b0: i64, dinv: i64, scale: &Rational| {
            let d = poly.degree().max(0);
            poly.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| {
                    let i = i as i64;
                    (Rational::from(c * scale), a0 + 3 * i, b0 + 2 * (d - i), dinv)
                })
                .collect::<Vec<_>>()
        };
        let net = mp as i64 - mq as i64;
        let scale = Rational::from(rug::Integer::from(1728).pow(net.unsigned_abs() as u32));
        let scale = if net >= 0 { scale } else { scale.recip() };
        if rest_q.degree() == 0 {
            let c = Rational::from(rest_q.coeff(0).recip_ref());
            (mono(&rest_p, self.a, b, -net, &(scale * c)), None)
        } else {
            let num = mono(&rest_p, self.a, b, -net, &scale);
            let den = mono(&rest_q, 0, 0, 0, &Rational::from(1));
            (num, Some(den))
        }
    }

    /// E₄^i E₆^j Δ^{−k} times c.
    pub fn monomial(c: Rational, i: i64, j: i64, k: i64) -> Self {
        Self::e4().pow(i).mul(&Self::e6().pow(j)).mul(&Self::delta().pow(-k)).scale(&c)
    }
}

fn fmt_mono(c: &Rational, i: i64, j: i64, k: i64, first: bool) -> String {
    let mut s = String::new();
    let neg = *c < 0;
    let mag = Rational::from(c.abs_ref());
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    let mut factors: Vec<String> = Vec::new();
    for (name, e) in [("E4", i), ("E6", j)] {
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            _ => factors.push(format!("{name}^{e}")),
        }
    }
    let mut den: Vec<String> = Vec::new();
    match k {
        0 => {}
        1 => den.push("Delta".into()),
        k if k > 0 => den.push(format!("Delta^{k}")),
        -1 => factors.push("Delta".into()),
        k => factors.push(format!("Delta^{}", -k)),
    }
    let body = if factors.is_empty() {
        mag.to_string()
    } else if mag == 1 {
        factors.join("*")
    } else {
        format!("{}*{}", mag, factors.join("*"))
    };
    s.push_str(&body);
    if !den.is_empty() {
        s.push('/');
        s.push_str(&den[0]);
    }
    s
}

fn fmt_monos(m: &[(Rational, i64, i64, i64)]) -> String {
    m.iter()
        .enumerate()
        .map(|(n, (c, i, j, k))| fmt_mono(c, *i, *j, *k, n == 0))
        .collect()
}

impl fmt::Display for ModularFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (num, den) = self.monomials();
        let n = fmt_monos(&num);
        match den {
            None => write!(f, "{n}"),
            Some(d) => {
                let wrap = |s: String, many: bool| if many { format!("({s})") } else { s };
                write!(f, "{}/{}", wrap(n, num.len() > 1), wrap(fmt_monos(&d), d.len() > 1 || d[0].0 != 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::eisenstein_values;

    #[test]
    fn delta_identity() {
        let d = ModularFn::delta();
        let e = ModularFn::e4().pow(3).sub(&ModularFn::e6().pow(2)).unwrap();
        assert_eq!(d.scale(&Rational::from(1728)), e);
        assert_eq!(d.weight(), 12);
    }

    #[test]
    fn q_expansions() {
        assert_eq!(ModularFn::delta().recip().unwrap().qexp(1).to_terms_string(), "q^-1 + 24 + 324*q");
        let j = ModularFn::j().qexp(1);
        assert_eq!(j.to_terms_string(), "q^-1 + 744 + 196884*q");
        let inv_e6 = ModularFn::e6().recip().unwrap().qexp(2);
        assert_eq!(inv_e6.to_terms_string(), "1 + 504*q + 270648*q^2");
    }

    #[test]
    fn serre_of_generators() {
        assert_eq!(ModularFn::e4().serre(), ModularFn::e6().scale(&Rational::from((-1, 3))));
        assert_eq!(ModularFn::e6().serre(), ModularFn::e4().pow(2).scale(&Rational::from((-1, 2))));
        assert!(ModularFn::delta().serre().is_zero());
        assert!(ModularFn::delta().pow(-2).serre().is_zero());
        assert!(ModularFn::j().serre().weight() == 2);
    }

    #[test]
    fn zero_keeps_weight() {
        let z = ModularFn::e4().sub(&ModularFn::e4()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.weight(), 4);
        assert!(ModularFn::e4().add(&ModularFn::e6()).is_err());
    }

    #[test]
    fn numeric_eval_matches_series() {
        let f = ModularFn::e4().pow(2).mul(&ModularFn::e6()).div(&ModularFn::delta()).unwrap();
        let tau = Complex::with_val(128, (0.1, 1.2));
        let v = eisenstein_values(&tau, 128);
        let a = f.eval(&v, 128);
        let (b, _) = f.qexp(80).evaluate(&tau, 128, 0.5).unwrap();
        let rel = Complex::with_val(128, &a - &b).abs().real().to_f64() / a.abs().real().to_f64();
        assert!(rel < 1e-30, "{rel}");
    }

    #[test]
    fn display_monomials() {
        assert_eq!(ModularFn::j().to_string(), "E4^3/Delta");
        assert_eq!(ModularFn::delta().to_string(), "Delta");
        assert_eq!(ModularFn::delta().pow(-2).mul(&ModularFn::e4()).to_string(), "E4/Delta^2");
        assert_eq!(ModularFn::e6().recip().unwrap().to_string(), "E6^-1");
    }
}
