//! Arbitrary-precision special functions: complex Γ, incomplete Γ with a
//! configurable branch, Hurwitz ζ and the polylogarithm of complex order.

mod gamma;
mod incgamma;
mod polylog;
mod zeta;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use incgamma::{e1, lower_gamma, upper_gamma};
pub use polylog::{polylog, polylog_laurent_coeffs, polylog_neg_int};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_regular};

use crate::error::{QmfError, Result};
use rug::{Complex, Float};
use std::f64::consts::PI;

/// Branch cut for logarithms: arguments are taken in (θ − 2π, θ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchConfig {
    pub theta: f64,
}

impl Default for BranchConfig {
    fn default() -> Self {
        BranchConfig { theta: 1.25 * PI }
    }
}

impl BranchConfig {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > PI && theta < 1.5 * PI) {
            return Err(QmfError::Unsupported(format!("branch angle {theta} outside (pi, 3pi/2)")));
        }
        Ok(BranchConfig { theta })
    }

    /// Number of turns m such that arg z + 2πm lies in (θ − 2π, θ).
    pub fn sheet(&self, z: &Complex) -> Result<i32> {
        let arg = Float::with_val(64, z.imag()).atan2(z.real()).to_f64();
        let lo = self.theta - 2.0 * PI;
        if (arg - lo).abs() < 1e-15 {
            return Err(QmfError::BranchCut);
        }
        Ok(if arg < lo { 1 } else { 0 })
    }

    /// log z with imaginary part in (θ − 2π, θ).
    pub fn ln(&self, z: &Complex) -> Result<Complex> {
        let m = self.sheet(z)?;
        let l = Complex::with_val(z.prec(), z.ln_ref());
        if m == 0 {
            Ok(l)
        } else {
            let two_pi = Float::with_val(z.prec().0, rug::float::Constant::Pi) * 2u32 * m;
            Ok(l + Complex::with_val(z.prec(), (0, two_pi)))
        }
    }
}

pub(crate) fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

#[cfg(test)]
pub(crate) fn c(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub(crate) fn abs(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

/// z^s with the principal logarithm.
pub(crate) fn cpow(z: &Complex, s: &Complex, prec: u32) -> Complex {
    let l = Complex::with_val(prec, z.ln_ref());
    Complex::with_val(prec, l * s).exp()
}

/// 2^{-bits} as an f64-free Float.
pub(crate) fn eps(bits: u32) -> Float {
    Float::with_val(64, Float::i_exp(1, -(bits as i32)))
}

/// (e^z − 1)/z without cancellation near 0.
pub(crate) fn phi(z: &Complex, wp: u32) -> Complex {
    if abs(z) > 0.5 {
        return Complex::with_val(wp, Complex::with_val(wp, z.exp_ref()) - 1u32) / z;
    }
    let tol = eps(wp + 4);
    let mut term = Complex::with_val(wp, 1);
    let mut sum = Complex::with_val(wp, 1);
    for k in 2u32.. {
        term *= z;
        term /= k;
        sum += &term;
        if Float::with_val(64, term.abs_ref()) < tol {
            break;
        }
    }
    sum
}

/// Distance from s to the nearest nonpositive integer, and that integer.
pub(crate) fn near_nonpositive_int(s: &Complex) -> (f64, i64) {
    let re = s.real().to_f64();
    let n = re.round().min(0.0);
    let d = Complex::with_val(s.prec(), s - n);
    (abs(&d), n as i64)
}

/// Exact test for a (real, integral) value.
pub(crate) fn as_integer(s: &Complex) -> Option<i64> {
    if !s.imag().is_zero() || !s.real().is_integer() {
        return None;
    }
    s.real().to_integer().and_then(|i| i.to_i64())
}
