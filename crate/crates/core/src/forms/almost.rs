//! Almost-holomorphic forms Σ F_j Y^j with Y = −1/(4π Im τ), and the
//! Maass–Shimura operator δ_k = D + kY.

use super::quasi::QuasiForm;
use crate::arith::binom;
use crate::numeric::{eisenstein_values, y_symbol};
use rug::{Complex, Integer, Rational};

/// Σ_j F_j Y^j of total weight k; F_j has weight k − 2j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostHolo {
    weight: i64,
    coeffs: Vec<QuasiForm>,
}

impl AlmostHolo {
    pub fn from_form(f: &QuasiForm) -> Self {
        AlmostHolo { weight: f.weight(), coeffs: vec![f.clone()] }
    }

    pub fn new(weight: i64, mut coeffs: Vec<QuasiForm>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlmostHolo { weight, coeffs }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Coefficients indexed by the power of Y.
    pub fn coeffs(&self) -> &[QuasiForm] {
        &self.coeffs
    }

    /// Highest power of Y present (0 for a holomorphic result).
    pub fn y_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// δ_k(F Y^j) = DF·Y^j + (k − j)F·Y^{j+1}, using DY = −Y².
    pub fn delta(&self) -> Self {
        let k = self.weight;
        let mut out: Vec<QuasiForm> =
            (0..=self.coeffs.len()).map(|j| QuasiForm::zero(k + 2 - 2 * j as i64)).collect();
        for (j, f) in self.coeffs.iter().enumerate() {
            out[j] = out[j].add(&f.d()).unwrap();
            let c = Rational::from(k - j as i64);
            out[j + 1] = out[j + 1].add(&f.scale(&c)).unwrap();
        }
        Self::new(k + 2, out)
    }

    pub fn eval(&self, tau: &Complex, prec: u32) -> Complex {
        let v = eisenstein_values(tau, prec);
        let y = y_symbol(tau, prec + 16);
        let mut acc = Complex::new(prec);
        for f in self.coeffs.iter().rev() {
            acc *= &y;
            acc += f.eval_with(&v, prec);
        }
        acc
    }
}

/// δ_kⁿ f = Σ_j C(n,j)(k+j)^{(n−j)} Y^{n−j} D^j f with rising factorials.
pub fn maass_shimura(f: &QuasiForm, n: u32) -> AlmostHolo {
    let k = f.weight();
    let n = n as i64;
    let mut coeffs: Vec<QuasiForm> = (0..=n).map(|j| QuasiForm::zero(k + 2 * j)).collect();
    let mut dj = f.clone();
    for j in 0..=n {
        let mut rising = Integer::from(1);
        for t in 0..(n - j) {
            rising *= k + j + t;
        }
        let c = Rational::from(binom(n, j) * rising);
        coeffs[(n - j) as usize] = dj.scale(&c);
        if j < n {
            dj = dj.d();
        }
    }
    AlmostHolo::new(k + 2 * n, coeffs)
}

/// n applications of δ one step at a time; agrees with [`maass_shimura`].
pub fn maass_shimura_iter(f: &QuasiForm, n: u32) -> AlmostHolo {
    let mut g = AlmostHolo::from_form(f);
    for _ in 0..n {
        g = g.delta();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn closed_form_matches_iteration() {
        let f = QuasiForm::e4().div(&QuasiForm::delta()).unwrap();
        for n in 0..5 {
            assert_eq!(maass_shimura(&f, n), maass_shimura_iter(&f, n), "n = {n}");
        }
    }

    #[test]
    fn zeroth_power_is_identity() {
        let f = QuasiForm::e6();
        assert_eq!(maass_shimura(&f, 0), AlmostHolo::from_form(&f));
    }

    #[test]
    fn single_step() {
        let f = QuasiForm::e4();
        let d = maass_shimura(&f, 1);
        assert_eq!(d.coeffs()[0], f.d());
        assert_eq!(d.coeffs()[1], f.scale(&Rational::from(4)));
    }

    #[test]
    fn bol_identity() {
        let f = QuasiForm::delta().pow(-1).unwrap();
        let d = maass_shimura(&f, 13);
        assert_eq!(d.y_degree(), 0);
        assert_eq!(d.coeffs()[0], f.d_pow(13));
    }

    #[test]
    fn delta_of_modular_is_equivariant() {
        // (δ₄E₄)(−1/τ) = τ⁶ (δ₄E₄)(τ)
        let prec = 128;
        let g = maass_shimura(&QuasiForm::e4(), 1);
        let tau = Complex::with_val(prec, (0.2, 0.9));
        let st = Complex::with_val(prec, -Complex::with_val(prec, 1) / &tau);
        let lhs = g.eval(&st, prec);
        let rhs = g.eval(&tau, prec) * Complex::with_val(prec, tau.clone().pow(6u32));
        let err = Complex::with_val(prec, &lhs - &rhs).abs().real().to_f64();
        assert!(err < 1e-30 * rhs.abs().real().to_f64(), "{err}");
        // the opposite sign is not equivariant
        let bad = AlmostHolo::new(6, vec![QuasiForm::e4().d(), QuasiForm::e4().scale(&Rational::from(-4))]);
        let l2 = bad.eval(&st, prec);
        let r2 = bad.eval(&tau, prec) * Complex::with_val(prec, tau.clone().pow(6u32));
        assert!(Complex::with_val(prec, l2 - r2).abs().real().to_f64() > 1e-3);
    }
}
