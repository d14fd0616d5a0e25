//! Rankin–Cohen brackets for all integer weights, Cohen–Kuznetsov series and
//! the Lanphier–El Gradechi change of basis.

use crate::arith::{binom, factorial};
use crate::error::{QmfError, Result};
use crate::forms::{decompose, maass_shimura, AlmostHolo, QuasiForm};
use crate::qseries::QSeries;
use rug::{Integer, Rational};

fn rat(i: Integer) -> Rational {
    Rational::from(i)
}

fn bracket_sum(
    f: &QuasiForm,
    g: &QuasiForm,
    n: u32,
    kk: i64,
    ll: i64,
    op: impl Fn(&QuasiForm, u32, usize) -> QuasiForm,
) -> QuasiForm {
    let n_i = n as i64;
    let mut acc = QuasiForm::zero(f.weight() + g.weight() + 2 * n_i);
    for j in 0..=n_i {
        let c = binom(n_i + kk - 1, j) * binom(n_i + ll - 1, n_i - j);
        if c == 0 {
            continue;
        }
        let c = if j % 2 == 0 { c } else { -c };
        let term = op(f, (n_i - j) as u32, 0).mul(&op(g, j as u32, 1)).scale(&rat(c));
        acc = acc.add(&term).unwrap();
    }
    acc
}

/// [f,g]_n = Σ_j (−1)^j C(n+k−1, j) C(n+l−1, n−j) D^{n−j}f D^j g for modular f, g.
pub fn rc_bracket(f: &QuasiForm, g: &QuasiForm, n: u32) -> Result<QuasiForm> {
    if !f.is_modular() || !g.is_modular() {
        return Err(QmfError::Inapplicable("rc_bracket needs forms of depth 0".into()));
    }
    Ok(bracket_sum(f, g, n, f.weight(), g.weight(), |h, m, _| h.d_pow(m)))
}

/// Bracket of quasi-modular forms with binomials in k + s − 1 and l + t − 1,
/// where s, t are the depths.
pub fn rc_bracket_quasi(f: &QuasiForm, g: &QuasiForm, n: u32) -> QuasiForm {
    let kk = f.weight() + f.depth() as i64;
    let ll = g.weight() + g.depth() as i64;
    bracket_sum(f, g, n, kk, ll, |h, m, _| h.d_pow(m))
}

/// ϑ applied m times with the depth parameter held at the input depth s:
/// ϑ_{k+2i,s} ∘ … ∘ ϑ_{k,s}.
pub fn serre_pow(f: &QuasiForm, m: u32, s: usize) -> QuasiForm {
    let mut h = f.clone();
    for _ in 0..m {
        let c = Rational::from((h.weight() - s as i64, 12));
        h = h.d().sub(&QuasiForm::e2().mul(&h).scale(&c)).unwrap();
    }
    h
}

/// Se[f,g]_n = Σ_j (−1)^j C(n+k−1, j) C(n+l−1, n−j) ϑ^{n−j}f ϑ^j g.
pub fn serre_rc_bracket(f: &QuasiForm, g: &QuasiForm, n: u32) -> QuasiForm {
    let depths = [f.depth(), g.depth()];
    bracket_sum(f, g, n, f.weight(), g.weight(), |h, m, side| serre_pow(h, m, depths[side]))
}

/// c_{i,j}^{k,l,n} = Σ_r (−1)^r C(n−i, n−j−r) C(k+i−1, i−r) C(l+i−1, r).
pub fn lanphier_c(i: i64, j: i64, k: i64, l: i64, n: i64) -> Rational {
    let mut s = Integer::new();
    for r in 0..=i {
        let t = binom(n - i, n - j - r) * binom(k + i - 1, i - r) * binom(l + i - 1, r);
        if r % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    rat(s)
}

/// b_{i,j}^{k,l,n}; errors when a denominator binomial vanishes.
pub fn lanphier_b(i: i64, j: i64, k: i64, l: i64, n: i64) -> Result<Rational> {
    let den = binom(n, i) * binom(k + l + n + j - 1, n - j) * binom(k + l + 2 * j - 2, j);
    if den == 0 {
        return Err(QmfError::Inapplicable(format!(
            "b^{{{k},{l},{n}}}_{{{i},{j}}} has a vanishing denominator"
        )));
    }
    let mut s = Integer::new();
    for r in 0..=j {
        let t = binom(j, r) * binom(k + n - i - 1, n - i - r) * binom(l + i - 1, r + i - j);
        if r % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    Ok(Rational::from((binom(n, j) * s, den)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkVariant {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkOperator {
    D,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CkCoeff {
    D(QuasiForm),
    Delta(AlmostHolo),
}

/// Σ_n c_n X^n f Tⁿ where X is D or δ, truncated in T.
#[derive(Clone, Debug)]
pub struct CkSeries {
    pub variant: CkVariant,
    pub operator: CkOperator,
    pub weight: i64,
    pub q_order: i64,
    /// (power of T, scalar c_n, Xⁿf).
    pub terms: Vec<(i64, Rational, CkCoeff)>,
}

impl CkSeries {
    /// The Tⁿ coefficient as a q-series (D operator only).
    pub fn coeff_series(&self, n: i64) -> Option<QSeries> {
        for (m, c, x) in &self.terms {
            if *m == n {
                return match x {
                    CkCoeff::D(f) => Some(f.qexp(self.q_order).scale(c)),
                    CkCoeff::Delta(_) => None,
                };
            }
        }
        if self.operator == CkOperator::D {
            Some(QSeries::zero(self.q_order))
        } else {
            None
        }
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }
}

/// CK⁻ = Σ_{n=0}^{−k} (−1)^{n+k} (−k−n)!/n! Xⁿf Tⁿ (zero for k > 0);
/// CK⁺ = Σ_{n ≥ max(0, 1−k)} Xⁿf/(n!(n+k−1)!) Tⁿ through T^{t_order}.
pub fn ck_series(f: &QuasiForm, variant: CkVariant, operator: CkOperator, t_order: i64, q_order: i64) -> CkSeries {
    let k = f.weight();
    let range: Vec<i64> = match variant {
        CkVariant::Minus => (0..=(-k).min(t_order)).collect(),
        CkVariant::Plus => ((0i64).max(1 - k)..=t_order).collect(),
    };
    let mut terms = Vec::new();
    for n in range {
        let c = match variant {
            CkVariant::Minus => {
                let v = Rational::from((factorial((-k - n) as u32), factorial(n as u32)));
                if (n + k) % 2 == 0 { v } else { -v }
            }
            CkVariant::Plus => {
                Rational::from((1, factorial(n as u32) * factorial((n + k - 1) as u32)))
            }
        };
        let x = match operator {
            CkOperator::D => CkCoeff::D(f.d_pow(n as u32)),
            CkOperator::Delta => CkCoeff::Delta(maass_shimura(f, n as u32)),
        };
        terms.push((n, c, x));
    }
    CkSeries { variant, operator, weight: k, q_order, terms }
}

/// A derivative summand D^order(form) of a product decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivTerm {
    pub order: u32,
    pub form: QuasiForm,
    /// Whether the modular form has vanishing constant term.
    pub cuspidal: bool,
}

/// fg = modular + Σ D^{order}(form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub modular: QuasiForm,
    pub derivs: Vec<DerivTerm>,
}

impl ProductDecomposition {
    pub fn resynthesize(&self) -> QuasiForm {
        let mut f = self.modular.clone();
        for t in &self.derivs {
            f = f.add(&t.form.d_pow(t.order)).unwrap();
        }
        f
    }
}

#[derive(PartialEq, Eq, Clone, Copy, Debug)]
enum Cone {
    Plus,
    Minus,
    Both,
}

fn cone(f: &QuasiForm) -> Option<Cone> {
    let k = f.weight();
    if f.is_zero() || (k == 0 && f.is_modular() && f.part(0).is_constant()) {
        return Some(Cone::Both);
    }
    if k <= 0 {
        return Some(Cone::Minus);
    }
    if 2 * f.depth() as i64 <= k - 2 {
        return Some(Cone::Plus);
    }
    None
}

/// (D^{n−i}f)(D^i g) rebuilt as Σ_j b_{i,j}(−1)^j D^{n−j}[f,g]_j.
/// The b and c coefficients belong to Cohen's bracket, which is (−1)^j times `rc_bracket`.
pub fn derivative_product(f: &QuasiForm, g: &QuasiForm, n: u32, i: u32) -> Result<QuasiForm> {
    let (k, l) = (f.weight(), g.weight());
    let mut acc = QuasiForm::zero(k + l + 2 * n as i64);
    for j in 0..=n {
        let b = lanphier_b(i as i64, j as i64, k, l, n as i64)?;
        if b == 0 {
            continue;
        }
        let b = if j % 2 == 0 { b } else { -b };
        acc = acc.add(&rc_bracket(f, g, j)?.d_pow(n - j).scale(&b))?;
    }
    Ok(acc)
}

/// Expresses fg through Lanphier–El Gradechi: after writing f = Σ D^a F_a and
/// g = Σ D^b G_b, each (D^a F)(D^b G) is Σ_j b_{b,j} D^{a+b−j}[F,G]_j.
pub fn product_decomposition(f: &QuasiForm, g: &QuasiForm) -> Result<ProductDecomposition> {
    let (cf, cg) = match (cone(f), cone(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(QmfError::Inapplicable("form lies in neither cone".into())),
    };
    if (cf == Cone::Plus && cg == Cone::Minus) || (cf == Cone::Minus && cg == Cone::Plus) {
        return Err(QmfError::Inapplicable("forms lie in different cones".into()));
    }
    let total = f.weight() + g.weight();
    let pieces = |h: &QuasiForm| {
        let d = decompose(h);
        let mut v: Vec<(u32, QuasiForm)> = d.first;
        v.extend(d.third);
        debug_assert!(d.middle.is_empty());
        v
    };
    let fs = pieces(f);
    let gs = pieces(g);
    let mut modular = QuasiForm::zero(total);
    let mut by_order: std::collections::BTreeMap<u32, QuasiForm> = Default::default();
    for (a, ff) in &fs {
        for (b, gg) in &gs {
            let n = (*a + *b) as i64;
            let (k, l) = (ff.weight(), gg.weight());
            for j in 0..=n {
                let c = lanphier_b(*b as i64, j, k, l, n)?;
                if c == 0 {
                    continue;
                }
                let c = if j % 2 == 0 { c } else { -c };
                let br = rc_bracket(ff, gg, j as u32)?.scale(&c);
                let order = (n - j) as u32;
                if order == 0 {
                    modular = modular.add(&br)?;
                } else {
                    let e = by_order.remove(&order);
                    let s = match e {
                        Some(x) => x.add(&br)?,
                        None => br,
                    };
                    by_order.insert(order, s);
                }
            }
        }
    }
    let derivs = by_order
        .into_iter()
        .filter(|(_, h)| !h.is_zero())
        .map(|(order, form)| {
            let cuspidal = form.qexp(0).coeff(0).is_some_and(|c| c == 0);
            DerivTerm { order, form, cuspidal }
        })
        .collect();
    Ok(ProductDecomposition { modular, derivs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_delta() -> QuasiForm {
        QuasiForm::delta().pow(-1).unwrap()
    }

    #[test]
    fn bracket_e4_e6() {
        let b = rc_bracket(&QuasiForm::e4(), &QuasiForm::e6(), 1).unwrap();
        assert_eq!(b, QuasiForm::delta().scale(&Rational::from(3456)));
        let b0 = rc_bracket(&QuasiForm::e4(), &QuasiForm::e6(), 0).unwrap();
        assert_eq!(b0, QuasiForm::e4().mul(&QuasiForm::e6()));
    }

    #[test]
    fn antisymmetry_and_modularity() {
        let f = inv_delta();
        let g = QuasiForm::e4();
        for n in 0..6 {
            let a = rc_bracket(&f, &g, n).unwrap();
            let b = rc_bracket(&g, &f, n).unwrap();
            let sign = Rational::from(if n % 2 == 0 { 1 } else { -1 });
            assert_eq!(a, b.scale(&sign));
            assert!(a.is_modular());
            assert_eq!(a.weight(), -8 + 2 * n as i64);
        }
    }

    #[test]
    fn case_three_vanishing() {
        let f = inv_delta();
        assert!(rc_bracket(&f, &f, 13).unwrap().is_zero());
    }

    #[test]
    fn mutual_inverse() {
        let (k, l, n) = (4, 4, 3);
        for i in 0..=n {
            for j in 0..=n {
                let mut s = Rational::new();
                for r in 0..=n {
                    s += lanphier_b(i, r, k, l, n).unwrap() * lanphier_c(r, j, k, l, n);
                }
                assert_eq!(s, if i == j { 1 } else { 0 });
            }
        }
        assert_eq!(lanphier_c(0, 0, 4, 6, 0), 1);
    }

    #[test]
    fn quasi_brackets() {
        let e2 = QuasiForm::e2();
        assert_eq!(serre_rc_bracket(&e2, &e2, 0), e2.mul(&e2));
        assert_eq!(rc_bracket_quasi(&e2, &e2, 0), e2.mul(&e2));
        assert!(rc_bracket_quasi(&e2, &e2, 1).depth() <= 2);
        assert!(serre_rc_bracket(&e2, &e2, 2).depth() <= 2);
    }

    #[test]
    fn ck_shapes() {
        let plus = ck_series(&QuasiForm::e4(), CkVariant::Plus, CkOperator::D, 3, 5);
        assert_eq!(plus.terms[0].1, Rational::from((1, 6)));
        assert_eq!(plus.min_power(), Some(0));
        let minus = ck_series(&QuasiForm::e4(), CkVariant::Minus, CkOperator::D, 3, 5);
        assert!(minus.terms.is_empty());
        let p = ck_series(&inv_delta(), CkVariant::Plus, CkOperator::D, 15, 5);
        assert_eq!(p.min_power(), Some(13));
    }

    #[test]
    fn product_decompositions() {
        let c = QuasiForm::constant(3);
        let d = product_decomposition(&c, &c).unwrap();
        assert_eq!(d.modular, QuasiForm::constant(9));
        assert!(d.derivs.is_empty());
        let f = inv_delta().d();
        let g = inv_delta();
        let d = product_decomposition(&f, &g).unwrap();
        assert_eq!(d.resynthesize(), f.mul(&g));
        let d = product_decomposition(&QuasiForm::e4(), &QuasiForm::e6()).unwrap();
        assert_eq!(d.modular, QuasiForm::e4().mul(&QuasiForm::e6()));
        assert!(product_decomposition(&QuasiForm::e4(), &inv_delta()).is_err());
        // odd brackets contribute here
        let f = QuasiForm::e4().d();
        let d = product_decomposition(&f, &QuasiForm::e6()).unwrap();
        assert_eq!(d.resynthesize(), f.mul(&QuasiForm::e6()));
    }

    #[test]
    fn derivative_products_rebuild() {
        let (f, g) = (QuasiForm::e4(), QuasiForm::e6());
        for i in 0..=2 {
            let want = f.d_pow(2 - i).mul(&g.d_pow(i));
            assert_eq!(derivative_product(&f, &g, 2, i).unwrap(), want, "i = {i}");
        }
        // c expands D^{n−i} of Cohen's bracket
        let n = 3;
        for i in 0..=n {
            let sign = Rational::from(if i % 2 == 0 { 1 } else { -1 });
            let lhs = rc_bracket(&f, &g, i as u32).unwrap().d_pow((n - i) as u32).scale(&sign);
            let mut rhs = QuasiForm::zero(16);
            for j in 0..=n {
                let t = f.d_pow((n - j) as u32).mul(&g.d_pow(j as u32)).scale(&lanphier_c(i, j, 4, 6, n));
                rhs = rhs.add(&t).unwrap();
            }
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }
}
