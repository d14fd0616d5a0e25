//! Run settings: flags override the config file, which overrides the defaults.

use qmf_core::lfun::LConfig;
use qmf_core::specfun::BranchConfig;
use rug::{Complex, Float, Rational};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub t0: f64,
    pub prec: u32,
    /// `None` is adaptive.
    pub trunc: Option<i64>,
    pub branch_angle: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { t0: 1.05, prec: 256, trunc: None, branch_angle: 1.25 * PI }
    }
}

/// Values given on the command line or in a config file, all optional.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub t0: Option<String>,
    pub prec: Option<String>,
    pub trunc: Option<String>,
    pub branch_angle: Option<String>,
}

impl Overrides {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_config(text: &str) -> Result<Self, String> {
        let mut o = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let v = Some(v.trim().to_string());
            match k.trim() {
                "t0" => o.t0 = v,
                "prec" => o.prec = v,
                "trunc" => o.trunc = v,
                "branch-angle" => o.branch_angle = v,
                other => return Err(format!("config line {}: unknown key '{other}'", i + 1)),
            }
        }
        Ok(o)
    }

    /// Entries of `self` win over those of `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            t0: self.t0.or(base.t0),
            prec: self.prec.or(base.prec),
            trunc: self.trunc.or(base.trunc),
            branch_angle: self.branch_angle.or(base.branch_angle),
        }
    }

    pub fn resolve(&self) -> Result<Settings, String> {
        let mut s = Settings::default();
        if let Some(v) = &self.t0 {
            s.t0 = real(v)?;
            if !(s.t0 > 0.0) {
                return Err(format!("t0 must be positive, got {v}"));
            }
        }
        if let Some(v) = &self.prec {
            s.prec = v.parse().ok().filter(|p| (32..=8192).contains(p)).ok_or_else(|| format!("prec must be an integer in 32..8192, got {v}"))?;
        }
        if let Some(v) = &self.trunc {
            s.trunc = match v.as_str() {
                "adaptive" => None,
                _ => Some(v.parse().ok().filter(|n| *n >= 1).ok_or_else(|| format!("trunc must be a positive integer or 'adaptive', got {v}"))?),
            };
        }
        if let Some(v) = &self.branch_angle {
            s.branch_angle = angle(v)?;
            BranchConfig::new(s.branch_angle).map_err(|e| e.to_string())?;
        }
        Ok(s)
    }
}

impl Settings {
    pub fn lconfig(&self) -> LConfig {
        LConfig {
            t0: self.t0,
            prec: self.prec,
            trunc: self.trunc,
            branch: BranchConfig::new(self.branch_angle).expect("validated on resolve"),
            ..LConfig::default()
        }
    }
}

/// A decimal or p/q literal, with optional sign.
pub fn rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let bad = || format!("malformed number '{text}'");
    let parse_dec = |s: &str| -> Result<Rational, String> {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if s.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || int.len() + frac.len() == 0 {
            return Err(bad());
        }
        let num: rug::Integer = format!("{int}{frac}").parse().map_err(|_| bad())?;
        Ok(Rational::from((num, rug::Integer::from(rug::Integer::u_pow_u(10, frac.len() as u32)))))
    };
    let r = match body.split_once('/') {
        Some((a, b)) => {
            let d = parse_dec(b)?;
            if d == 0 {
                return Err(format!("zero denominator in '{text}'"));
            }
            Rational::from(parse_dec(a)? / d)
        }
        None => parse_dec(body)?,
    };
    Ok(if neg { -r } else { r })
}

fn real(text: &str) -> Result<f64, String> {
    Ok(Float::with_val(53, rational(text)?).to_f64())
}

/// Radians, given as a number or as a multiple of pi such as `5pi/4`, `11*pi/8` or `pi`.
pub fn angle(text: &str) -> Result<f64, String> {
    let t = text.replace(' ', "");
    match t.split_once("pi") {
        None => real(&t),
        Some((coef, rest)) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = if coef.is_empty() { 1.0 } else { real(coef)? };
            let d = match rest.strip_prefix('/') {
                Some(d) => real(d)?,
                None if rest.is_empty() => 1.0,
                None => return Err(format!("malformed angle '{text}'")),
            };
            Ok(c * PI / d)
        }
    }
}

/// A complex number written `a`, `bi`, `a+bi` or `a-bi`, with decimal or p/q parts.
pub fn complex(text: &str, prec: u32) -> Result<Complex, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let to = |r: Rational| Float::with_val(prec, r);
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::with_val(prec, (to(rational(&t)?), 0)));
    };
    // the split is the last sign that is not the leading one
    let cut = body.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).last();
    let (re, im) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    Ok(Complex::with_val(prec, (to(rational(re)?), to(rational(im)?))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_config_beat_defaults() {
        let file = Overrides::from_config("t0 = 1.2\nprec=128 # lower\n").unwrap();
        let flags = Overrides { t0: Some("1.31".into()), ..Default::default() };
        let s = flags.over(file).resolve().unwrap();
        assert_eq!(s.t0, 1.31);
        assert_eq!(s.prec, 128);
        assert_eq!(s.trunc, None);
        assert_eq!(s.branch_angle, 1.25 * PI);
    }

    #[test]
    fn bad_values_are_reported() {
        assert!(Overrides::from_config("speed=3").is_err());
        assert!(Overrides { prec: Some("12".into()), ..Default::default() }.resolve().is_err());
        assert!(Overrides { branch_angle: Some("pi/2".into()), ..Default::default() }.resolve().is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(angle("5pi/4").unwrap(), 1.25 * PI);
        assert_eq!(angle("11*pi/8").unwrap(), 11.0 * PI / 8.0);
        assert_eq!(angle("3.5").unwrap(), 3.5);
    }

    #[test]
    fn complex_literals() {
        let c = |s: &str| {
            let z = complex(s, 64).unwrap();
            (z.real().to_f64(), z.imag().to_f64())
        };
        assert_eq!(c("3+2i"), (3.0, 2.0));
        assert_eq!(c("-1.5-0.25i"), (-1.5, -0.25));
        assert_eq!(c("23/2"), (11.5, 0.0));
        assert_eq!(c("-i"), (0.0, -1.0));
        assert_eq!(c("2i"), (0.0, 2.0));
        assert!(complex("3+", 64).is_err());
    }
}
