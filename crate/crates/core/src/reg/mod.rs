//! Regularized integration: the exponential regulator at 0 and ∞ and
//! Hadamard finite parts at real poles.

mod hadamard;
mod infinity;
pub mod quad;

pub use hadamard::{hadamard_fp, hadamard_method, laurent_at, HadamardMethod, LaurentData};
pub use infinity::{reg_integral_infinity, reg_integral_zero_infinity};

use rug::{Complex, Float};
use std::fmt;
use std::sync::Arc;

/// Growth class at an endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Growth {
    Polynomial,
    /// |f(t)| ≪ e^{rate·t}.
    LinearExponential(f64),
}

/// t^{power} Σ a(n) e^{−2πnt}, valid on [t₀, ∞) for the t₀ values used.
#[derive(Clone, Debug)]
pub struct FourierTail {
    pub power: Complex,
    pub terms: Vec<(i64, Complex)>,
}

impl FourierTail {
    pub fn new(power: Complex, terms: Vec<(i64, Complex)>) -> Self {
        FourierTail { power, terms }
    }

    /// Exponential rate 2π·max(0, −n_min) of the expansion.
    pub fn rate(&self) -> f64 {
        let n = self.terms.iter().filter(|(_, a)| !a.is_zero()).map(|(n, _)| *n).min().unwrap_or(0);
        2.0 * std::f64::consts::PI * (-n).max(0) as f64
    }
}

type Eval = Arc<dyn Fn(&Complex, u32) -> Complex + Send + Sync>;

/// A function on a real interval with its complexification, declared real
/// poles, and optional Fourier-type expansions at ∞ and (after t ↦ 1/t) at 0.
#[derive(Clone)]
pub struct Integrand {
    eval: Eval,
    pub poles: Vec<(Float, u32)>,
    /// f is meromorphic, with only the declared poles, within this distance of the real axis.
    pub holo_radius: f64,
    pub growth: Growth,
    pub at_infinity: Option<FourierTail>,
    /// Expansion of f(1/t)/t².
    pub at_zero: Option<FourierTail>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand").field("poles", &self.poles).field("holo_radius", &self.holo_radius).field("growth", &self.growth).finish()
    }
}

impl Integrand {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(&Complex, u32) -> Complex + Send + Sync + 'static,
    {
        Integrand { eval: Arc::new(eval), poles: Vec::new(), holo_radius: f64::INFINITY, growth: Growth::Polynomial, at_infinity: None, at_zero: None }
    }

    pub fn with_pole(mut self, c: Float, order: u32) -> Self {
        self.poles.push((c, order));
        self
    }

    pub fn with_holo_radius(mut self, r: f64) -> Self {
        self.holo_radius = r;
        self
    }

    pub fn with_growth(mut self, g: Growth) -> Self {
        self.growth = g;
        self
    }

    pub fn with_infinity(mut self, tail: FourierTail) -> Self {
        self.at_infinity = Some(tail);
        self
    }

    pub fn with_zero(mut self, tail: FourierTail) -> Self {
        self.at_zero = Some(tail);
        self
    }

    pub fn eval(&self, t: &Complex, prec: u32) -> Complex {
        (self.eval)(t, prec)
    }
}
