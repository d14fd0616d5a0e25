//! The batch commands. Each returns a `Report` that renders as text, JSON or CSV.

use crate::config::{complex, Settings};
use crate::expr::{parse, Expr, ExprError};
use qmf_core::brackets::{rc_bracket, rc_bracket_quasi, serre_rc_bracket};
use qmf_core::forms::{decompose, QuasiForm};
use qmf_core::lfun::{dirichlet_l, lambda, residue, residue_by_contour, verify_functional_equation, verify_shift, LConfig, LContext};
use qmf_core::numeric::{complex_json, float_decimal};
use qmf_core::poles::{pole_records, DEFAULT_T_FLOOR};
use qmf_core::reg::{hadamard_method, HadamardMethod, Integrand};
use qmf_core::specfun::BranchConfig;
use qmf_core::QmfError;
use rug::{Complex, Float};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A failed command: the exit code and the message for standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn math(e: QmfError) -> Self {
        Failure { code: EXIT_MATH, message: format!("error: {e}") }
    }

    fn expr(src: &str, e: ExprError) -> Self {
        let (code, at, len) = match &e {
            ExprError::Syntax { pos, .. } => (EXIT_USAGE, *pos, 1),
            ExprError::Math { span, .. } => (EXIT_MATH, span.0, (span.1 - span.0).max(1)),
        };
        Failure { code, message: format!("error: {e}\n  {src}\n  {}{}", " ".repeat(at), "^".repeat(len)) }
    }
}

impl From<QmfError> for Failure {
    fn from(e: QmfError) -> Self {
        Failure::math(e)
    }
}

/// The outcome of a command that ran to completion.
#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    /// False for a verification that did not meet its tolerance.
    pub pass: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, csv: None, pass: true }
    }

    /// The bytes for standard output and the exit code.
    pub fn render(&self, format: Format) -> Result<(String, i32), Failure> {
        let out = match format {
            Format::Text => self.text.clone(),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json")),
            Format::Csv => self.csv.clone().ok_or_else(|| Failure::usage("error: --format csv is only available for table"))?,
        };
        Ok((out, if self.pass { EXIT_OK } else { EXIT_VERIFY }))
    }
}

fn form(src: &str) -> Result<(Expr, QuasiForm), Failure> {
    let e = parse(src).map_err(|e| Failure::expr(src, e))?;
    let f = e.eval().map_err(|e| Failure::expr(src, e))?;
    Ok((e, f))
}

/// Significant digits shown in text output for a precision in bits.
fn digits(prec: u32) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2).floor() as usize).clamp(6, 40)
}

fn real_text(x: &Float, d: usize) -> String {
    x.to_string_radix(10, Some(d))
}

fn complex_text(z: &Complex, d: usize) -> String {
    if z.imag().is_zero() {
        return real_text(z.real(), d);
    }
    let im = z.imag();
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", real_text(z.real(), d), real_text(&Float::with_val(im.prec(), im.abs_ref()), d))
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

/// Coefficients a(n) for n < `below`.
pub fn qexp(src: &str, below: i64) -> Result<Report, Failure> {
    let (e, f) = form(src)?;
    let s = f.qexp(below - 1);
    let terms = s.to_terms_string();
    let n0 = s.n_min();
    let coeffs: Vec<String> = (n0..below).map(|n| s.coeff(n).map(|c| c.to_string()).unwrap_or_else(|| "0".into())).collect();
    let json = json!({"expr": e.to_string(), "weight": f.weight(), "depth": f.depth(), "n_min": n0, "below": below, "coeffs": coeffs});
    Ok(Report::new(format!("{terms}\n"), json))
}

pub fn info(src: &str, st: &Settings) -> Result<Report, Failure> {
    let (e, f) = form(src)?;
    let poles = pole_records(&f, DEFAULT_T_FLOOR, st.prec)?;
    let d = digits(st.prec).min(20);
    let series = f.qexp(4);
    let mut text = String::new();
    writeln!(text, "expr:    {e}").unwrap();
    writeln!(text, "weight:  {}", f.weight()).unwrap();
    writeln!(text, "depth:   {}", f.depth()).unwrap();
    writeln!(text, "modular: {}", f.is_modular()).unwrap();
    writeln!(text, "form:    {f}").unwrap();
    writeln!(text, "qexp:    {series}").unwrap();
    if poles.is_empty() {
        writeln!(text, "poles with Im >= {DEFAULT_T_FLOOR}: none").unwrap();
    } else {
        writeln!(text, "poles with Im >= {DEFAULT_T_FLOOR}:").unwrap();
        for p in &poles {
            writeln!(text, "  alpha = {}  order {}  leading {}", complex_text(&p.alpha, d), p.order, complex_text(&p.coeff(p.order), d)).unwrap();
        }
    }
    let json = json!({
        "expr": e.to_string(),
        "weight": f.weight(),
        "depth": f.depth(),
        "modular": f.is_modular(),
        "form": f.to_string(),
        "qexp": series.to_terms_string(),
        "t_floor": DEFAULT_T_FLOOR,
        "poles": poles.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
    });
    Ok(Report::new(text, json))
}

pub fn decomposition(src: &str) -> Result<Report, Failure> {
    let (e, f) = form(src)?;
    let dec = decompose(&f);
    let exact = dec.resynthesize() == f;
    let mut text = format!("expr:   {e}\nweight: {}\n", dec.weight);
    for (name, block) in [("first", &dec.first), ("middle", &dec.middle), ("third", &dec.third)] {
        if block.is_empty() {
            writeln!(text, "{name}: (empty)").unwrap();
        }
        for (l, g) in block.iter() {
            writeln!(text, "{name}: l={l}  {g}").unwrap();
        }
    }
    writeln!(text, "resynthesis exact: {exact}").unwrap();
    let mut json = dec.to_json();
    json["expr"] = json!(e.to_string());
    json["resynthesis_exact"] = json!(exact);
    let mut r = Report::new(text, json);
    r.pass = exact;
    Ok(r)
}

fn bracket_of(f: &QuasiForm, g: &QuasiForm, n: u32, serre: bool) -> Result<QuasiForm, Failure> {
    Ok(if serre {
        serre_rc_bracket(f, g, n)
    } else if f.is_modular() && g.is_modular() {
        rc_bracket(f, g, n)?
    } else {
        rc_bracket_quasi(f, g, n)
    })
}

pub fn bracket(fs: &str, gs: &str, n: u32, serre: bool) -> Result<Report, Failure> {
    let (fe, f) = form(fs)?;
    let (ge, g) = form(gs)?;
    let b = bracket_of(&f, &g, n, serre)?;
    let name = if serre { "src" } else { "rc" };
    let series = b.qexp(4);
    let text = format!(
        "{name}({fe}, {ge}, {n})\nweight:  {}\ndepth:   {}\nzero:    {}\nform:    {b}\nqexp:    {series}\n",
        b.weight(),
        b.depth(),
        b.is_zero()
    );
    let json = json!({
        "bracket": name, "f": fe.to_string(), "g": ge.to_string(), "n": n,
        "weight": b.weight(), "depth": b.depth(), "zero": b.is_zero(),
        "form": b.to_string(), "qexp": series.to_terms_string(),
    });
    Ok(Report::new(text, json))
}

pub fn lvalue(src: &str, s: &str, st: &Settings) -> Result<Report, Failure> {
    let (e, f) = form(src)?;
    let s = complex(s, st.prec + 32).map_err(Failure::usage)?;
    let ctx = LContext::new(&f, &st.lconfig())?;
    let r = lambda(&ctx, &s)?;
    let d = digits(st.prec);
    let text = format!(
        "expr:   {e}\nweight: {}\ndepth:  {}\nt0:     {}\ns:      {}\nLambda: {}\nL:      {}\nerr:    {}\n",
        f.weight(),
        f.depth(),
        real_text(&r.t0, d),
        complex_text(&r.s, d),
        complex_text(&r.lambda, d),
        complex_text(&r.l, d),
        sci(r.err)
    );
    let mut json = r.to_json();
    json["expr"] = json!(e.to_string());
    json["prec"] = json!(st.prec);
    Ok(Report::new(text, json))
}

/// Λ and L on the segment from `from` to `to` in `steps` equal steps.
pub fn table(src: &str, from: &str, to: &str, steps: u32, st: &Settings) -> Result<Report, Failure> {
    if steps == 0 {
        return Err(Failure::usage("error: --steps must be positive"));
    }
    let (e, f) = form(src)?;
    let wp = st.prec + 32;
    let a = complex(from, wp).map_err(Failure::usage)?;
    let b = complex(to, wp).map_err(Failure::usage)?;
    let ctx = LContext::new(&f, &st.lconfig())?;
    let d = digits(st.prec).min(20);
    let mut text = format!("expr: {e}  t0: {}\n", real_text(&ctx.t0, d));
    let mut csv = String::from("s_re,s_im,lambda_re,lambda_im,l_re,l_im\n");
    let mut rows = Vec::new();
    for j in 0..=steps {
        let step = Complex::with_val(wp, &b - &a) * j / steps;
        let s = Complex::with_val(st.prec, &a + step);
        match lambda(&ctx, &s) {
            Ok(r) => {
                writeln!(text, "s = {:<24}  Lambda = {:<52}  L = {}", complex_text(&s, 8), complex_text(&r.lambda, d), complex_text(&r.l, d)).unwrap();
                let parts = [s.real(), s.imag(), r.lambda.real(), r.lambda.imag(), r.l.real(), r.l.imag()];
                writeln!(csv, "{}", parts.iter().map(|x| float_decimal(x)).collect::<Vec<_>>().join(",")).unwrap();
                rows.push(json!({"s": complex_json(&s), "lambda": complex_json(&r.lambda), "l": complex_json(&r.l), "err": r.err}));
            }
            Err(QmfError::NearPole { pole, residue_re, residue_im }) => {
                let l = dirichlet_l(&ctx, &s).ok();
                let l_text = l.as_ref().map(|z| complex_text(z, d)).unwrap_or_else(|| "pole".into());
                writeln!(text, "s = {:<24}  Lambda = {:<52}  L = {l_text}", complex_text(&s, 8), format!("pole at {pole}")).unwrap();
                let l_csv = l.as_ref().map(|z| format!("{},{}", float_decimal(z.real()), float_decimal(z.imag()))).unwrap_or_else(|| "pole,pole".into());
                writeln!(csv, "{},{},pole,pole,{l_csv}", float_decimal(s.real()), float_decimal(s.imag())).unwrap();
                rows.push(json!({"s": complex_json(&s), "pole": pole, "residue": [residue_re, residue_im], "l": l.as_ref().map(complex_json)}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let json = json!({"expr": e.to_string(), "t0": float_decimal(&ctx.t0), "rows": rows});
    Ok(Report { text, json, csv: Some(csv), pass: true })
}

/// Which verification `check` runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Fe,
    Shift,
    T0,
    Residues,
    Hadamard,
    Rc,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Fe => "fe",
            CheckKind::Shift => "shift",
            CheckKind::T0 => "t0",
            CheckKind::Residues => "residues",
            CheckKind::Hadamard => "hadamard",
            CheckKind::Rc => "rc",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            CheckKind::Residues => 1e-15,
            CheckKind::Hadamard => 1e-30,
            _ => 1e-20,
        }
    }
}

/// Fixed sample points, away from the integers where Λ may have poles.
fn samples(prec: u32) -> Vec<Complex> {
    [(0.4, 1.3), (-7.2, -0.6), (3.5, 2.0), (9.25, -1.75)].iter().map(|&p| Complex::with_val(prec, p)).collect()
}

struct Checked {
    lines: Vec<(String, f64)>,
    extra: Value,
}

pub fn check(kind: CheckKind, exprs: &[String], n: Option<u32>, tol: Option<f64>, st: &Settings) -> Result<Report, Failure> {
    let want = match kind {
        CheckKind::Hadamard => 0,
        CheckKind::Rc => 2,
        _ => 1,
    };
    if exprs.len() != want {
        return Err(Failure::usage(format!("error: check {} takes {want} expression(s), got {}", kind.name(), exprs.len())));
    }
    let tol = tol.unwrap_or(kind.default_tol());
    let cfg = st.lconfig();
    let c = match kind {
        CheckKind::Fe => check_fe(&exprs[0], &cfg)?,
        CheckKind::Shift => check_shift(&exprs[0], n.unwrap_or(1), &cfg)?,
        CheckKind::T0 => check_t0(&exprs[0], &cfg)?,
        CheckKind::Residues => check_residues(&exprs[0], &cfg)?,
        CheckKind::Hadamard => check_hadamard(n.unwrap_or(2), st.prec)?,
        CheckKind::Rc => check_rc(&exprs[0], &exprs[1], n.unwrap_or(1))?,
    };
    let worst = c.lines.iter().map(|l| l.1).fold(0.0, f64::max);
    let pass = worst < tol && c.extra.get("modular").and_then(Value::as_bool).unwrap_or(true);
    let mut text = format!("check {}: {}\n", kind.name(), if pass { "pass" } else { "FAIL" });
    for (label, r) in &c.lines {
        writeln!(text, "  {label:<36} residual {}", sci(*r)).unwrap();
    }
    if let Value::Object(m) = &c.extra {
        for (k, v) in m {
            writeln!(text, "  {k}: {v}").unwrap();
        }
    }
    writeln!(text, "  max residual {}  tolerance {}", sci(worst), sci(tol)).unwrap();
    let json = json!({
        "kind": kind.name(),
        "exprs": exprs,
        "pass": pass,
        "max_residual": worst,
        "tolerance": tol,
        "residuals": c.lines.iter().map(|(l, r)| json!({"label": l, "residual": r})).collect::<Vec<_>>(),
        "details": c.extra,
    });
    Ok(Report { text, json, csv: None, pass })
}

fn check_fe(src: &str, cfg: &LConfig) -> Result<Checked, Failure> {
    let (_, f) = form(src)?;
    let pts = samples(cfg.prec + 32);
    let mut lines = Vec::new();
    for m in 0..=f.depth() {
        lines.push((format!("component m={m}"), verify_functional_equation(&f, m, &pts, cfg)?));
    }
    Ok(Checked { lines, extra: json!({}) })
}

fn check_shift(src: &str, l: u32, cfg: &LConfig) -> Result<Checked, Failure> {
    let (_, f) = form(src)?;
    let r = verify_shift(&f, l, &samples(cfg.prec + 32), cfg)?;
    Ok(Checked { lines: vec![(format!("shift l={l}"), r)], extra: json!({}) })
}

fn check_t0(src: &str, cfg: &LConfig) -> Result<Checked, Failure> {
    let (_, f) = form(src)?;
    let other = LConfig { t0: 1.31, branch: BranchConfig::new(11.0 * PI / 8.0)?, ..cfg.clone() };
    let a = LContext::new(&f, cfg)?;
    let b = LContext::new(&f, &other)?;
    let wp = cfg.prec + 32;
    let mut lines = Vec::new();
    for s in samples(wp) {
        let d = Complex::with_val(wp, lambda(&a, &s)?.lambda - lambda(&b, &s)?.lambda);
        lines.push((format!("s = {}", complex_text(&s, 6)), d.abs().real().to_f64()));
    }
    let extra = json!({"t0": [float_decimal(&a.t0), float_decimal(&b.t0)], "branch_angle": [cfg.branch.theta, other.branch.theta]});
    Ok(Checked { lines, extra })
}

fn check_residues(src: &str, cfg: &LConfig) -> Result<Checked, Failure> {
    let (_, f) = form(src)?;
    let ctx = LContext::new(&f, cfg)?;
    let k = f.weight();
    let mut cands: Vec<i64> = ((k - f.depth() as i64)..=k).collect();
    cands.push(0);
    cands.sort_unstable();
    cands.dedup();
    let mut lines = Vec::new();
    let mut values = serde_json::Map::new();
    for n in cands {
        let closed = residue(&ctx, n)?;
        let contour = residue_by_contour(&ctx, n, 0.25, 32)?;
        let d = Complex::with_val(ctx.prec, &closed - &contour).abs().real().to_f64();
        values.insert(n.to_string(), complex_json(&closed));
        lines.push((format!("s = {n}  Res = {}", complex_text(&closed, 12)), d));
    }
    Ok(Checked { lines, extra: json!({ "residues": values }) })
}

fn check_hadamard(order: u32, prec: u32) -> Result<Checked, Failure> {
    if order == 0 {
        return Err(Failure::usage("error: the pole order must be positive"));
    }
    let f = Integrand::new(move |t: &Complex, p: u32| {
        let u = Complex::with_val(p, t - 1u32);
        let mut den = Complex::with_val(p, 1);
        for _ in 0..order {
            den *= &u;
        }
        Complex::with_val(p, -t).exp() / den
    })
    .with_pole(Float::with_val(prec, 1), order);
    let (a, b, c) = (Float::with_val(prec, 0), Float::with_val(prec, 2), Float::with_val(prec, 1));
    let vals = HadamardMethod::ALL.iter().map(|m| hadamard_method(&f, &a, &b, &c, order, *m, prec)).collect::<Result<Vec<_>, _>>()?;
    let d = digits(prec);
    let mut lines = Vec::new();
    for (m, v) in HadamardMethod::ALL.iter().zip(&vals).skip(1) {
        let r = Complex::with_val(prec, v - &vals[0]).abs().real().to_f64();
        lines.push((format!("{m:?} vs Riesz"), r));
    }
    let extra = json!({"integrand": format!("exp(-t)/(t-1)^{order} on [0, 2]"), "value": complex_text(&vals[0], d)});
    Ok(Checked { lines, extra })
}

fn check_rc(fs: &str, gs: &str, n: u32) -> Result<Checked, Failure> {
    let (_, f) = form(fs)?;
    let (_, g) = form(gs)?;
    let b = bracket_of(&f, &g, n, false)?;
    let want = f.weight() + g.weight() + 2 * n as i64;
    let modular = b.is_zero() || (b.is_modular() && b.weight() == want);
    let extra = json!({"weight": want, "modular": modular, "exact_zero": b.is_zero(), "form": b.to_string()});
    Ok(Checked { lines: vec![], extra })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qexp_of_inverse_delta() {
        assert_eq!(qexp("1/Delta", 2).unwrap().text, "q^-1 + 24 + 324*q\n");
    }

    #[test]
    fn info_reports_weight_and_depth() {
        let r = info("D(1/Delta)", &Settings::default()).unwrap();
        assert_eq!(r.json["weight"], -10);
        assert_eq!(r.json["depth"], 1);
    }

    #[test]
    fn decompose_d_e2_is_middle() {
        let r = decomposition("D(E2)").unwrap();
        assert_eq!(r.json["middle"][0]["l"], 1);
        assert!(r.json["first"].as_array().unwrap().is_empty());
        assert!(r.pass);
    }

    #[test]
    fn rc_case_three_vanishes() {
        let r = check(CheckKind::Rc, &["1/Delta".into(), "1/Delta".into()], Some(13), None, &Settings::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.json["details"]["exact_zero"], true);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(qexp("E4 +", 3).unwrap_err().code, EXIT_USAGE);
        assert_eq!(qexp("E4 + E6", 3).unwrap_err().code, EXIT_MATH);
        let near = lvalue("1/Delta", "0", &Settings::default()).unwrap_err();
        assert_eq!(near.code, EXIT_MATH);
        assert!(near.message.contains("-24"), "{}", near.message);
        assert_eq!(qexp("E4", 3).unwrap().render(Format::Csv).unwrap_err().code, EXIT_USAGE);
    }
}
