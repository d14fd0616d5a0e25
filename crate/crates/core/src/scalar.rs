//! Exact scalars of the form r·πᵃ·iᵇ.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::Serialize;
use std::fmt;
use std::ops::Mul;

/// `r · π^a · i^b` with `b` reduced mod 4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ScalarPi {
    #[serde(serialize_with = "ser_rat")]
    pub r: Rational,
    pub a: i64,
    pub b: u8,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl ScalarPi {
    pub fn new(r: impl Into<Rational>, a: i64, b: i64) -> Self {
        ScalarPi { r: r.into(), a, b: b.rem_euclid(4) as u8 }
    }

    pub fn one() -> Self {
        Self::new(1, 0, 0)
    }

    pub fn rational(r: impl Into<Rational>) -> Self {
        Self::new(r, 0, 0)
    }

    /// (6/(πi))^r, the prefactor of the r-th component function.
    pub fn six_over_pi_i(r: u32) -> Self {
        Self::new(rug::Integer::from(6u32).pow(r), -(r as i64), -(r as i64))
    }

    /// (2πi)^m for any integer m.
    pub fn two_pi_i(m: i64) -> Self {
        let two = Rational::from(2);
        let r = if m >= 0 {
            Rational::from(two.pow(m as u32))
        } else {
            Rational::from(two.pow(-m as u32)).recip()
        };
        Self::new(r, m, m)
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0
    }

    pub fn recip(&self) -> Self {
        Self::new(Rational::from(self.r.recip_ref()), -self.a, -(self.b as i64))
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let wp = prec + 16;
        let pi = Float::with_val(wp, rug::float::Constant::Pi);
        let mag = Float::with_val(wp, &self.r) * pi.pow(self.a as i32);
        let v = match self.b {
            0 => Complex::with_val(prec, (&mag, 0)),
            1 => Complex::with_val(prec, (0, &mag)),
            2 => Complex::with_val(prec, (-mag, 0)),
            _ => Complex::with_val(prec, (0, -mag)),
        };
        v
    }
}

impl Mul for &ScalarPi {
    type Output = ScalarPi;
    fn mul(self, rhs: &ScalarPi) -> ScalarPi {
        ScalarPi::new(
            Rational::from(&self.r * &rhs.r),
            self.a + rhs.a,
            self.b as i64 + rhs.b as i64,
        )
    }
}

impl fmt::Display for ScalarPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 0 {
            return write!(f, "0");
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        // i^2 = -1 and i^3 = -i fold into the sign
        let neg = (self.r < 0) ^ (self.b >= 2);
        let r = Rational::from(self.r.abs_ref());
        num.push(r.numer().to_string());
        if *r.denom() != 1 {
            den.push(r.denom().to_string());
        }
        match self.a {
            0 => {}
            1 => num.push("pi".into()),
            a if a > 1 => num.push(format!("pi^{a}")),
            -1 => den.push("pi".into()),
            a => den.push(format!("pi^{}", -a)),
        }
        if self.b % 2 == 1 {
            num.push("i".into());
        }
        if num.len() > 1 && num[0] == "1" {
            num.remove(0);
        }
        let sign = if neg { "-" } else { "" };
        let n = num.join("*");
        match den.len() {
            0 => write!(f, "{sign}{n}"),
            1 => write!(f, "{sign}{n}/{}", den[0]),
            _ => write!(f, "{sign}{n}/({})", den.join("*")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn componentwise_product() {
        let s = ScalarPi::six_over_pi_i(1);
        let t = &s * &s;
        assert_eq!(t, ScalarPi::new(36, -2, 2));
        assert_eq!(&s * &s.recip(), ScalarPi::one());
        assert_eq!(ScalarPi::new(1, 0, 7).b, 3);
    }

    #[test]
    fn display() {
        assert_eq!(ScalarPi::six_over_pi_i(1).to_string(), "-6*i/pi");
        assert_eq!(ScalarPi::two_pi_i(-1).to_string(), "-i/(2*pi)");
        assert_eq!(ScalarPi::rational(3).to_string(), "3");
    }

    #[test]
    fn numeric_value() {
        let v = ScalarPi::six_over_pi_i(1).to_complex(64);
        let expect = -6.0 / std::f64::consts::PI;
        assert!((v.imag().to_f64() - expect).abs() < 1e-15);
        assert!(v.real().is_zero());
    }
}
