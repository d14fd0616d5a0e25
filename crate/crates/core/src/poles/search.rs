//! Zeros of the denominator in the strip: argument-principle counts on
//! subdivided rectangles, cluster centroids from contour moments, then Newton.

use super::{denominator, DenEval};
use crate::error::{QmfError, Result};
use crate::forms::QuasiForm;
use crate::reg::quad::quad_many;
use crate::specfun::abs;
use rug::{Complex, Float};

const COUNT_PREC: u32 = 64;
const RETRIES: usize = 8;

/// A zero of the denominator; the pole order of f there is at most `multiplicity`.
#[derive(Clone, Debug)]
pub struct PolePosition {
    pub alpha: Complex,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

/// Contour moments (1/2πi)∮ τ^p h′/h dτ for p = 0, 1, 2 = Σ over zeros of τ^p.
fn moments(den: &DenEval, r: &Rect) -> Vec<Complex> {
    let p = COUNT_PREC;
    let corners = [(r.x0, r.y0), (r.x1, r.y0), (r.x1, r.y1), (r.x0, r.y1)];
    let mut acc = vec![Complex::new(p); 3];
    for i in 0..4 {
        let a = Complex::with_val(p, corners[i]);
        let b = Complex::with_val(p, corners[(i + 1) % 4]);
        let part = quad_many(
            |t: &Complex| {
                let g = den.log_deriv(t, p);
                let g1 = Complex::with_val(p, &g * t);
                let g2 = Complex::with_val(p, &g1 * t);
                vec![g, g1, g2]
            },
            &a,
            &b,
            p,
        );
        for (x, y) in acc.iter_mut().zip(part) {
            *x += y;
        }
    }
    acc
}

/// The zero count in `r`, or `None` when the contour runs too close to a zero.
fn count(m0: &Complex) -> Option<u32> {
    let re = m0.real().to_f64();
    let n = re.round();
    let off = (re - n).abs() + m0.imag().to_f64().abs();
    (off < 0.05 && n >= 0.0).then_some(n as u32)
}

struct Boxed {
    rect: Rect,
    n: u32,
    m: Vec<Complex>,
}

fn measure(den: &DenEval, rect: Rect) -> Option<Boxed> {
    let m = moments(den, &rect);
    count(&m[0]).map(|n| Boxed { rect, n, m })
}

/// Splits along the longer side, nudging the cut off any zero it meets.
fn split(den: &DenEval, b: &Boxed) -> Result<(Boxed, Boxed)> {
    let r = b.rect;
    let horizontal = r.x1 - r.x0 >= r.y1 - r.y0;
    let (lo, hi) = if horizontal { (r.x0, r.x1) } else { (r.y0, r.y1) };
    for k in 0..=RETRIES {
        let off = if k % 2 == 0 { k as f64 } else { -(k as f64) };
        let cut = lo + (hi - lo) * (0.5 + 0.0371 * off);
        let (ra, rb) = if horizontal {
            (Rect { x1: cut, ..r }, Rect { x0: cut, ..r })
        } else {
            (Rect { y1: cut, ..r }, Rect { y0: cut, ..r })
        };
        if let (Some(a), Some(c)) = (measure(den, ra), measure(den, rb)) {
            if a.n + c.n == b.n {
                return Ok((a, c));
            }
        }
    }
    Err(QmfError::SearchDegeneracy(format!("cut through {r:?} keeps meeting a zero")))
}

/// Isolates clusters of zeros: boxes whose zeros share one position.
fn isolate(den: &DenEval, b: Boxed, out: &mut Vec<(Complex, u32)>, depth: u32) -> Result<()> {
    if b.n == 0 {
        return Ok(());
    }
    let p = COUNT_PREC;
    let n = b.n;
    let mean = Complex::with_val(p, &b.m[1] / n);
    let var = Complex::with_val(p, Complex::with_val(p, &b.m[2] / n) - Complex::with_val(p, &mean * &mean));
    let size = (b.rect.x1 - b.rect.x0).max(b.rect.y1 - b.rect.y0);
    if abs(&var) < (1e-3 * size).powi(2) || depth > 40 {
        out.push((mean, n));
        return Ok(());
    }
    let (a, c) = split(den, &b)?;
    isolate(den, a, out, depth + 1)?;
    isolate(den, c, out, depth + 1)
}

/// Modified Newton for a zero of multiplicity m, at precision enough for m-fold roots.
fn refine(den: &DenEval, start: &Complex, m: u32, prec: u32) -> Complex {
    let wp = prec * m + 32;
    let mut tau = Complex::with_val(wp, start);
    let mut last = f64::INFINITY;
    for _ in 0..200 {
        let step = den.newton_step(&tau, m, wp);
        tau -= &step;
        let s = abs(&step);
        if s < 2f64.powi(-(prec as i32) - 8) || (s >= last && s < 1e-10) {
            break;
        }
        last = s;
    }
    Complex::with_val(prec, &tau)
}

/// Height above which the constant term of h dominates its q-expansion.
fn height_bound(h: &QuasiForm, start: f64) -> f64 {
    let s = h.qexp(40);
    let mag = |n: i64| s.coeff(n).map(|c| c.to_f64().abs()).unwrap_or(0.0);
    let b0 = mag(0);
    let mut t = start.max(1.0);
    loop {
        let q = (-2.0 * std::f64::consts::PI * t).exp();
        // coefficients of a holomorphic form grow polynomially, so the q^41 tail is negligible here
        let rest: f64 = (1..=40).map(|n| mag(n) * q.powi(n as i32)).sum();
        if rest < b0 / 4.0 {
            return t + 0.25;
        }
        t += 0.25;
    }
}

/// Reduces Re α into [−1/2, 1/2), sending the right edge to the left one
/// and snapping rounding-level real parts to the symmetric axis.
fn reduce(alpha: Complex, prec: u32) -> Complex {
    let (re, im) = alpha.into_real_imag();
    let shift = Float::with_val(prec, &re + 0.5f64).floor();
    let mut re = re - shift;
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let edge = Float::with_val(prec, &re - 0.5f64).abs();
    if edge < tol || Float::with_val(prec, &re + 0.5f64).abs() < tol {
        re = Float::with_val(prec, -0.5f64);
    } else if Float::with_val(prec, re.abs_ref()) < tol {
        re = Float::new(prec);
    }
    Complex::with_val(prec, (re, im))
}

/// All zeros of the denominator of f with Re ∈ [−1/2, 1/2) and Im ≥ t_floor, with multiplicity.
pub fn find_poles(f: &QuasiForm, t_floor: f64, prec: u32) -> Result<Vec<PolePosition>> {
    if t_floor <= 0.0 {
        return Err(QmfError::Inapplicable("t_floor must be positive".into()));
    }
    let h = denominator(f);
    if h.is_modular() && h.as_modular().is_some_and(|g| g.is_constant()) {
        return Ok(Vec::new());
    }
    let top = height_bound(&h, t_floor);
    let den = DenEval::new(h);
    let mut root = None;
    for k in 0..=RETRIES {
        // offsets keep the edges off the symmetric points of the strip
        let dx = 0.0173 + 0.011 * k as f64;
        let dy = 1e-3 * (1.0 + k as f64);
        let rect = Rect { x0: -0.5 - dx, x1: 0.5 - dx, y0: t_floor - dy, y1: top };
        if let Some(b) = measure(&den, rect) {
            root = Some(b);
            break;
        }
    }
    let root = root.ok_or_else(|| QmfError::SearchDegeneracy("strip boundary meets a zero".into()))?;
    let mut clusters = Vec::new();
    isolate(&den, root, &mut clusters, 0)?;
    let floor = Float::with_val(prec, t_floor) - Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let mut out = Vec::new();
    for (z, m) in clusters {
        let alpha = reduce(refine(&den, &z, m, prec), prec);
        if *alpha.imag() >= floor {
            out.push(PolePosition { alpha, multiplicity: m });
        }
    }
    out.sort_by(|a, b| b.alpha.imag().partial_cmp(a.alpha.imag()).unwrap().then(a.alpha.real().partial_cmp(b.alpha.real()).unwrap()));
    Ok(out)
}

/// Re-runs Newton on a located pole at a higher precision.
pub fn refine_position(f: &QuasiForm, p: &PolePosition, prec: u32) -> PolePosition {
    let den = DenEval::new(denominator(f));
    PolePosition { alpha: reduce(refine(&den, &p.alpha, p.multiplicity, prec), prec), multiplicity: p.multiplicity }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::QuasiForm;
    use crate::numeric::eisenstein_values;

    fn close(a: &Complex, re: f64, im: f64, tol: f64) -> bool {
        (a.real().to_f64() - re).abs() < tol && (a.imag().to_f64() - im).abs() < tol
    }

    #[test]
    fn inverse_delta_has_no_poles() {
        let f = QuasiForm::delta().pow(-1).unwrap();
        assert!(find_poles(&f, 0.85, 128).unwrap().is_empty());
    }

    #[test]
    fn inverse_e6_pole_at_i() {
        let f = QuasiForm::e6().pow(-1).unwrap();
        let p = find_poles(&f, 0.9, 128).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].multiplicity, 1);
        assert!(close(&p[0].alpha, 0.0, 1.0, 1e-30));
        assert!(p[0].alpha.real().is_zero());
        let r = refine_position(&f, &p[0], 400);
        assert!(abs(&eisenstein_values(&r.alpha, 400).e6) < 1e-110);
        let v = eisenstein_values(&p[0].alpha, 128);
        assert!(abs(&v.e6) < 1e-30);
    }

    #[test]
    fn inverse_e4_pole_at_rho_left_edge() {
        let f = QuasiForm::e4().pow(-1).unwrap();
        let p = find_poles(&f, 0.8, 128).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(*p[0].alpha.real(), -0.5f64);
        assert!(close(&p[0].alpha, -0.5, 3f64.sqrt() / 2.0, 1e-30));
    }

    #[test]
    fn double_pole_counted_with_multiplicity() {
        let f = QuasiForm::e6().pow(-2).unwrap();
        let p = find_poles(&f, 0.9, 128).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].multiplicity, 2);
        assert!(close(&p[0].alpha, 0.0, 1.0, 1e-30));
    }

    #[test]
    fn count_stable_under_subdivision() {
        let h = denominator(&QuasiForm::e4().mul(&QuasiForm::e6()).pow(-1).unwrap());
        let den = DenEval::new(h);
        let whole = measure(&den, Rect { x0: -0.52, x1: 0.48, y0: 0.7, y1: 2.0 }).unwrap();
        let (a, b) = split(&den, &whole).unwrap();
        assert_eq!(whole.n, 2);
        assert_eq!(a.n + b.n, 2);
    }
}
