//! Dense univariate polynomials over ℚ.

use rug::{Complex, Rational};
use std::fmt;

/// Coefficients in increasing degree; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| *x == 0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// x − r.
    pub fn linear(r: impl Into<Rational>) -> Self {
        Self::new(vec![-r.into(), Rational::from(1)])
    }

    pub fn x_pow(n: usize) -> Self {
        let mut c = vec![Rational::new(); n + 1];
        c[n] = Rational::from(1);
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| Rational::from(c * s)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::new(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Multiplication by xⁿ.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::new(); n];
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    pub fn deriv(&self) -> Poly {
        Poly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u64)).collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv = Rational::from(d.lead().recip_ref());
        let mut q = vec![Rational::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = Rational::from(&r[k + dd] * &inv);
            if c != 0 {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= Rational::from(&c * dj);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&Rational::from(self.lead().recip_ref()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Largest e with xᵉ | self (0 for the zero polynomial).
    pub fn x_valuation(&self) -> usize {
        self.0.iter().position(|c| *c != 0).unwrap_or(0)
    }

    /// Division by x^n, assuming exactness.
    pub fn unshift(&self, n: usize) -> Poly {
        Poly::new(self.0[n.min(self.0.len())..].to_vec())
    }

    /// Splits off the largest power of (x − 1): returns (m, rest).
    pub fn split_x_minus_one(&self) -> (u32, Poly) {
        let mut m = 0;
        let mut p = self.clone();
        let lin = Poly::linear(1);
        while !p.is_zero() {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        (m, p)
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        let mut acc = Complex::new(x.prec());
        for c in self.0.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Homogenization Σ cᵢ uⁱ v^{d−i} with d = deg, evaluated at (u, v).
    pub fn eval_homogeneous(&self, u: &Complex, v: &Complex) -> Complex {
        let prec = u.prec();
        let mut acc = Complex::new(prec);
        let mut vp = Complex::with_val(prec, 1);
        // Horner in u/v without dividing: acc = Σ c_i u^i v^{d-i}
        for c in self.0.iter().rev() {
            acc *= u;
            acc += Complex::with_val(prec, c) * &vp;
            vp *= v;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}
