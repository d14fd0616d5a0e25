//! The expression language: atoms E2, E4, E6, Delta, j and rational literals,
//! the operators + − * / ^, and the functions D, D^n, theta, rc, src.

use qmf_core::brackets::{rc_bracket, rc_bracket_quasi, serre_rc_bracket};
use qmf_core::forms::QuasiForm;
use qmf_core::QmfError;
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    E2,
    E4,
    E6,
    Delta,
    J,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(Rational),
    Atom(Atom),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// D^n(x); plain D(x) has n = 1.
    D(u32, Box<Expr>),
    Theta(Box<Expr>),
    Rc(Box<Expr>, Box<Expr>, u32),
    Src(Box<Expr>, Box<Expr>, u32),
}

/// A node with the byte range it was parsed from.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: (usize, usize),
}

impl PartialEq for Expr {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
    }
}

/// Errors of the front end; `Math` carries the span of the offending node.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    Syntax { pos: usize, msg: String },
    Math { span: (usize, usize), err: QmfError },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            ExprError::Math { span, err } => write!(f, "{err} (in bytes {}..{})", span.0, span.1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Num(decimal(&src[start..i], start)?), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// "12", "1.25" as exact rationals.
fn decimal(s: &str, pos: usize) -> Result<Rational, ExprError> {
    let bad = || ExprError::Syntax { pos, msg: format!("malformed number '{s}'") };
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: Integer = digits.parse().map_err(|_| bad())?;
    Ok(Rational::from((num, Integer::from(10).pow(frac.len() as u32))))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.src.len())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn node(kind: ExprKind, start: usize, end: usize) -> Expr {
        Expr { kind, span: (start, end) }
    }

    /// End of the previous token.
    fn last_end(&self) -> usize {
        let (t, p) = &self.toks[self.at - 1];
        p + match t {
            Tok::Sym(_) => 1,
            Tok::Ident(s) => s.len(),
            Tok::Num(_) => self.src[*p..].find(|c: char| !(c.is_ascii_digit() || c == '.')).unwrap_or(self.src.len() - p),
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            let add = if self.eat('+') {
                true
            } else if self.eat('-') {
                false
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            let span = (lhs.span.0, rhs.span.1);
            let kind = if add { ExprKind::Add(Box::new(lhs), Box::new(rhs)) } else { ExprKind::Sub(Box::new(lhs), Box::new(rhs)) };
            lhs = Expr { kind, span };
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let mul = if self.eat('*') {
                true
            } else if self.eat('/') {
                false
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = match (mul, &lhs.kind, &rhs.kind) {
                // a literal fraction is a single rational
                (false, ExprKind::Num(a), ExprKind::Num(b)) if *b != 0 => Expr { kind: ExprKind::Num(Rational::from(a / b)), span },
                (true, ..) => Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span },
                (false, ..) => Expr { kind: ExprKind::Div(Box::new(lhs), Box::new(rhs)), span },
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            let end = inner.span.1;
            return Ok(Self::node(ExprKind::Neg(Box::new(inner)), start, end));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            return self.err("chained exponents are ambiguous; use parentheses");
        }
        let span = (base.span.0, self.last_end());
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), span })
    }

    /// An integer, optionally negative or parenthesized.
    fn exponent(&mut self) -> Result<i64, ExprError> {
        if self.eat('(') {
            let e = self.exponent()?;
            self.expect(')')?;
            return Ok(e);
        }
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Num(r)) if r.denom() == &1 => {
                let v = r.numer().to_i64().filter(|v| v.abs() <= 1 << 20);
                let Some(v) = v else { return self.err("exponent too large") };
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn small_int(&mut self) -> Result<u32, ExprError> {
        match self.peek() {
            Some(Tok::Num(r)) if r.denom() == &1 && *r >= 0 && *r <= 10_000 => {
                let v = r.numer().to_u32().unwrap();
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected a nonnegative integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos();
        let Some(tok) = self.peek().cloned() else { return self.err("unexpected end of input") };
        self.at += 1;
        let kind = match tok {
            Tok::Num(r) => ExprKind::Num(r),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                return Ok(Self::node(inner.kind, start, self.last_end()));
            }
            Tok::Sym(c) => {
                self.at -= 1;
                return self.err(format!("unexpected '{c}'"));
            }
            Tok::Ident(name) => match name.as_str() {
                "E2" => ExprKind::Atom(Atom::E2),
                "E4" => ExprKind::Atom(Atom::E4),
                "E6" => ExprKind::Atom(Atom::E6),
                "Delta" => ExprKind::Atom(Atom::Delta),
                "j" => ExprKind::Atom(Atom::J),
                "D" => {
                    let n = if self.eat('^') { self.small_int()? } else { 1 };
                    self.expect('(')?;
                    let x = self.sum()?;
                    self.expect(')')?;
                    ExprKind::D(n, Box::new(x))
                }
                "theta" => {
                    self.expect('(')?;
                    let x = self.sum()?;
                    self.expect(')')?;
                    ExprKind::Theta(Box::new(x))
                }
                "rc" | "src" => {
                    self.expect('(')?;
                    let f = self.sum()?;
                    self.expect(',')?;
                    let g = self.sum()?;
                    self.expect(',')?;
                    let n = self.small_int()?;
                    self.expect(')')?;
                    if name == "rc" {
                        ExprKind::Rc(Box::new(f), Box::new(g), n)
                    } else {
                        ExprKind::Src(Box::new(f), Box::new(g), n)
                    }
                }
                _ => {
                    self.at -= 1;
                    return self.err(format!("unknown name '{name}'"));
                }
            },
        };
        Ok(Self::node(kind, start, self.last_end()))
    }
}

/// Parses a whole expression.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, src };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Binding strength used by the printer: higher binds tighter.
    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Num(r) if r.denom() != &1 => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Elaborates to a form of a single weight.
    pub fn eval(&self) -> Result<QuasiForm, ExprError> {
        let math = |err: QmfError| ExprError::Math { span: self.span, err };
        Ok(match &self.kind {
            ExprKind::Num(r) => QuasiForm::constant(r.clone()),
            ExprKind::Atom(a) => match a {
                Atom::E2 => QuasiForm::e2(),
                Atom::E4 => QuasiForm::e4(),
                Atom::E6 => QuasiForm::e6(),
                Atom::Delta => QuasiForm::delta(),
                Atom::J => QuasiForm::e4().pow(3).and_then(|n| n.div(&QuasiForm::delta())).map_err(math)?,
            },
            ExprKind::Neg(x) => x.eval()?.neg(),
            ExprKind::Add(a, b) => a.eval()?.add(&b.eval()?).map_err(math)?,
            ExprKind::Sub(a, b) => a.eval()?.sub(&b.eval()?).map_err(math)?,
            ExprKind::Mul(a, b) => a.eval()?.mul(&b.eval()?),
            ExprKind::Div(a, b) => a.eval()?.div(&b.eval()?).map_err(math)?,
            ExprKind::Pow(a, e) => a.eval()?.pow(*e).map_err(math)?,
            ExprKind::D(n, x) => x.eval()?.d_pow(*n),
            ExprKind::Theta(x) => x.eval()?.serre(),
            ExprKind::Rc(a, b, n) => {
                let (f, g) = (a.eval()?, b.eval()?);
                if f.is_modular() && g.is_modular() {
                    rc_bracket(&f, &g, *n).map_err(math)?
                } else {
                    rc_bracket_quasi(&f, &g, *n)
                }
            }
            ExprKind::Src(a, b, n) => serre_rc_bracket(&a.eval()?, &b.eval()?, *n),
        })
    }
}

/// Writes `e`, parenthesized when it binds looser than `min`.
fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(r) => write!(f, "{r}"),
            ExprKind::Atom(a) => f.write_str(match a {
                Atom::E2 => "E2",
                Atom::E4 => "E4",
                Atom::E6 => "E6",
                Atom::Delta => "Delta",
                Atom::J => "j",
            }),
            ExprKind::Neg(x) => {
                f.write_str("-")?;
                child(f, x, 3)
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                child(f, a, 1)?;
                f.write_str(if matches!(self.kind, ExprKind::Add(..)) { " + " } else { " - " })?;
                child(f, b, 2)
            }
            ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                child(f, a, 2)?;
                f.write_str(if matches!(self.kind, ExprKind::Mul(..)) { "*" } else { "/" })?;
                // a literal on the right would fold into the left literal on reparse
                let folds = matches!(self.kind, ExprKind::Div(..)) && matches!((&a.kind, &b.kind), (ExprKind::Num(_), ExprKind::Num(_)));
                let min = if folds { 6 } else { 3 };
                child(f, b, min)
            }
            ExprKind::Pow(a, e) => {
                child(f, a, 5)?;
                write!(f, "^{e}")
            }
            ExprKind::D(1, x) => write!(f, "D({x})"),
            ExprKind::D(n, x) => write!(f, "D^{n}({x})"),
            ExprKind::Theta(x) => write!(f, "theta({x})"),
            ExprKind::Rc(a, b, n) => write!(f, "rc({a}, {b}, {n})"),
            ExprKind::Src(a, b, n) => write!(f, "src({a}, {b}, {n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> QuasiForm {
        parse(s).unwrap().eval().unwrap()
    }

    #[test]
    fn j_is_weight_zero() {
        let f = form("E4^3/Delta");
        assert_eq!((f.weight(), f.depth()), (0, 0));
        assert_eq!(f, form("j"));
    }

    #[test]
    fn derivative_of_e2_has_depth_two() {
        let f = form("D(E2)");
        assert_eq!((f.weight(), f.depth()), (4, 2));
        assert_eq!(form("D^2(E4)"), form("D(D(E4))"));
    }

    #[test]
    fn mixed_weights_are_rejected() {
        match parse("E4 + E6").unwrap().eval().unwrap_err() {
            ExprError::Math { span, err } => {
                assert_eq!(span, (0, 7));
                assert_eq!(err, QmfError::HeterogeneousWeight(4, 6));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than unary minus, which binds tighter than * and /
        assert_eq!(parse("-E4^2").unwrap().to_string(), "-E4^2");
        assert_eq!(form("-E4^2"), form("-(E4^2)"));
        assert_eq!(form("E4^2 - 2*E4^2"), form("-E4^2"));
        assert_eq!(form("2*E4/4 + E4"), form("3/2*E4"));
        assert_eq!(form("E6^-1"), form("1/E6"));
        assert_eq!(form("3/4*E4"), form("E4*(3/4)"));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(parse("E4 + * E6"), Err(ExprError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("E4^2^3"), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("E4 $"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("foo(E4)"), Err(ExprError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("(E4"), Err(ExprError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "E4^3/Delta",
            "-E4^3 + 3/4*E6^2",
            "D^3(Delta) - theta(E4)*E2*E4*E6",
            "rc(E4, E6, 1)/3456",
            "src(E2, E4, 2)",
            "E4*(E6 - E4*E2)/(Delta*E6)",
            "(3/2)^2*E4",
            "1.25*E4 - -E4",
            "2/3/E4",
            "E4/(2/3)",
        ] {
            let e = parse(s).unwrap();
            let back = parse(&e.to_string()).unwrap();
            assert_eq!(e, back, "{s} printed as {e}");
            assert_eq!(e.eval().unwrap(), back.eval().unwrap());
        }
    }
}
