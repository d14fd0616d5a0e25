//! Poles of meromorphic forms in the strip −1/2 ≤ Re τ < 1/2: location,
//! principal parts and the pole-subtracted expansion f̃.

pub mod principal;
pub mod search;
pub mod tilde;

use crate::forms::{ModularFn, QuasiForm};
use crate::numeric::{complex_json, eisenstein_values, pi};
use crate::poly::Poly;
use rug::{Complex, Float};

pub use principal::principal_part;
pub use search::{find_poles, refine_position, PolePosition};
pub use tilde::{coefficient_asymptotics, tilde_expansion, TildeExpansion};

/// Default lower edge of the search strip.
pub const DEFAULT_T_FLOOR: f64 = 0.85;

/// A pole α with its principal part Σ c(m)/(τ − α)^m.
#[derive(Clone, Debug)]
pub struct PoleRecord {
    pub alpha: Complex,
    pub order: u32,
    /// c(1), …, c(order).
    pub coeffs: Vec<Complex>,
    /// Natural size of each c(m), used to decide which ones vanish.
    scales: Vec<Float>,
    prec: u32,
}

impl PoleRecord {
    pub(crate) fn new(alpha: Complex, coeffs: Vec<Complex>, scales: Vec<Float>, prec: u32) -> Self {
        PoleRecord { alpha, order: coeffs.len() as u32, coeffs, scales, prec }
    }

    /// c(m) for 1 ≤ m ≤ order, zero otherwise.
    pub fn coeff(&self, m: u32) -> Complex {
        match m {
            1.. if m <= self.order => self.coeffs[m as usize - 1].clone(),
            _ => Complex::new(self.prec),
        }
    }

    /// Whether c(m) is indistinguishable from zero at the working precision.
    pub fn negligible(&self, m: u32) -> bool {
        let tol = Float::with_val(64, Float::i_exp(1, 24 - self.prec as i32)) * &self.scales[m as usize - 1];
        Float::with_val(64, self.coeffs[m as usize - 1].abs_ref()) < tol
    }

    /// Drops vanishing top coefficients; `None` when nothing is left.
    pub fn trimmed(mut self) -> Option<Self> {
        while self.order > 0 && self.negligible(self.order) {
            self.order -= 1;
            self.coeffs.pop();
            self.scales.pop();
        }
        (self.order > 0).then_some(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": complex_json(&self.alpha),
            "order": self.order,
            "coeffs": self.coeffs.iter().map(complex_json).collect::<Vec<_>>(),
        })
    }
}

/// Poles of f with Im α ≥ t_floor and their principal parts at `prec` bits.
pub fn pole_records(f: &QuasiForm, t_floor: f64, prec: u32) -> crate::Result<Vec<PoleRecord>> {
    let mut out = Vec::new();
    for p in find_poles(f, t_floor, prec)? {
        if let Some(r) = principal_part(f, &p.alpha, p.multiplicity, prec)?.trimmed() {
            out.push(r);
        }
    }
    Ok(out)
}

/// The holomorphic form whose zeros contain every pole of `f`: the product of
/// E₄ and E₆ powers with the homogenized lcm of the denominators of all parts.
pub fn denominator(f: &QuasiForm) -> QuasiForm {
    let (mut a, mut b) = (0, 0);
    let mut l = Poly::one();
    for g in f.parts() {
        if g.is_zero() {
            continue;
        }
        let (ga, gb, rest) = g.pole_data();
        a = a.max(ga);
        b = b.max(gb);
        if rest.degree() > 0 {
            let gcd = Poly::gcd(&l, &rest);
            l = l.mul(&rest).divrem(&gcd).0.monic();
        }
    }
    let d = l.degree();
    let hom = ModularFn::from_parts(0, 2 * d, l, Poly::one()).expect("nonzero denominator");
    let den = ModularFn::e4().pow(a).mul(&ModularFn::e6().pow(b)).mul(&hom);
    QuasiForm::from_modular(den)
}

/// A holomorphic form with its logarithmic derivative data: h and D h = q dh/dq.
pub(crate) struct DenEval {
    h: QuasiForm,
    dh: QuasiForm,
}

impl DenEval {
    pub(crate) fn new(h: QuasiForm) -> Self {
        let dh = h.d();
        DenEval { h, dh }
    }

    /// (h(τ), Dh(τ)).
    pub(crate) fn eval(&self, tau: &Complex, prec: u32) -> (Complex, Complex) {
        let v = eisenstein_values(tau, prec);
        (self.h.eval_with(&v, prec), self.dh.eval_with(&v, prec))
    }

    /// h′/h · 1/(2πi) = Dh/h, whose contour integral counts zeros.
    pub(crate) fn log_deriv(&self, tau: &Complex, prec: u32) -> Complex {
        let (h, dh) = self.eval(tau, prec);
        dh / h
    }

    /// Newton step for a zero of multiplicity m: m h/h′.
    pub(crate) fn newton_step(&self, tau: &Complex, m: u32, prec: u32) -> Complex {
        let (h, dh) = self.eval(tau, prec);
        let two_pi_i = Complex::with_val(prec, (0, pi(prec) * 2u32));
        h * m / (dh * two_pi_i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_serialize_at_full_precision() {
        let f = QuasiForm::e6().pow(-1).unwrap();
        let recs = pole_records(&f, 0.9, 128).unwrap();
        assert_eq!(recs.len(), 1);
        let j = recs[0].to_json();
        assert_eq!(j["order"], 1);
        let im: f64 = j["alpha"][1].as_str().unwrap().parse().unwrap();
        assert!((im - 1.0).abs() < 1e-15);
        assert!(j["coeffs"][0][0].as_str().unwrap().len() > 38);
    }

    #[test]
    fn cancelled_denominator_has_no_poles() {
        // E₆ · (1/E₆) normalizes to 1
        let f = QuasiForm::e6().mul(&QuasiForm::e6().pow(-1).unwrap());
        assert!(pole_records(&f, 0.85, 64).unwrap().is_empty());
    }

    #[test]
    fn quasi_modular_parts_share_poles() {
        // E₂/(E₆E₄²) has a simple pole at i and a double pole at ρ
        let f = QuasiForm::e2().div(&QuasiForm::e6().mul(&QuasiForm::e4().pow(2).unwrap())).unwrap();
        let recs = pole_records(&f, 0.85, 128).unwrap();
        assert_eq!(recs.iter().map(|r| r.order).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(*recs[1].alpha.real(), -0.5f64);
    }
}
