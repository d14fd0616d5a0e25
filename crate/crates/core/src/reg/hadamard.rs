use super::quad::{quad, quad_with_level, rule};
use super::Integrand;
use crate::arith::factorial;
use crate::error::{QmfError, Result};
use crate::specfun::{abs, pi};
use rug::{Complex, Float};

/// The five equivalent regularizations of ∫_a^b f across an interior pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardMethod {
    /// Constant term at s = 0 of ∫|t−c|^s f(t)dt.
    Riesz,
    /// Mean of the integrals along paths passing above and below the pole.
    ContourMean,
    /// Constant term in ε of the integral with (c−ε, c+ε) excised.
    FinitePart,
    /// Pairing of FP (t−c)^{−n} with F(t) = f(t)(t−c)^n via n−1 integrations by parts.
    DistributionPairing,
    /// Mean of the boundary values of ∫F(t)/(t−u)^n dt as u → c ± i0.
    Sokhotski,
}

impl HadamardMethod {
    pub const ALL: [HadamardMethod; 5] = [
        HadamardMethod::Riesz,
        HadamardMethod::ContourMean,
        HadamardMethod::FinitePart,
        HadamardMethod::DistributionPairing,
        HadamardMethod::Sokhotski,
    ];
}

/// Laurent coefficients of f at c, from (t−c)^{−order} up to (t−c)^{k}.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub c: Float,
    pub radius: Float,
    pub order: u32,
    pub coeffs: Vec<Complex>,
}

impl LaurentData {
    /// Coefficient of (t−c)^j.
    pub fn coeff(&self, j: i64) -> Complex {
        let idx = j + self.order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Complex::new(self.c.prec());
        }
        self.coeffs[idx as usize].clone()
    }

    pub fn max_index(&self) -> i64 {
        self.coeffs.len() as i64 - self.order as i64 - 1
    }

    /// Σ_{j=1}^{order} L_{−j} u^{−j}.
    pub fn singular(&self, u: &Complex) -> Complex {
        let wp = u.prec().0;
        let inv = Complex::with_val(wp, u.recip_ref());
        let mut p = inv.clone();
        let mut s = Complex::new(wp);
        for j in 1..=self.order as i64 {
            s += Complex::with_val(wp, &p * &self.coeff(-j));
            p *= &inv;
        }
        s
    }

    /// Σ_{j≥0} L_j u^j by Horner.
    pub fn regular(&self, u: &Complex) -> Complex {
        let wp = u.prec().0;
        let mut s = Complex::new(wp);
        for j in (0..=self.max_index()).rev() {
            s *= u;
            s += self.coeff(j);
        }
        s
    }
}

/// Laurent data of f at c from a trapezoidal Cauchy integral on |t−c| = r.
pub fn laurent_at(f: &Integrand, c: &Float, r: &Float, order: u32, k_max: usize, prec: u32) -> LaurentData {
    let wp = prec + 32;
    let n = order as usize;
    let nodes = n + k_max + wp as usize + 16;
    let p2 = Float::with_val(wp, pi(wp) * 2u32);
    let mut coeffs = vec![Complex::new(wp); n + k_max + 1];
    for m in 0..nodes {
        let th = Float::with_val(wp, &p2 * m as u32) / nodes as u32;
        let w = Complex::with_val(wp, (th.clone().cos(), th.sin())) * r;
        let t = Complex::with_val(wp, &w + c);
        let v = f.eval(&t, wp);
        let winv = Complex::with_val(wp, w.recip_ref());
        // start at (w)^{n} for j = −n, then multiply by w^{−1}
        let mut p = Complex::with_val(wp, 1);
        for _ in 0..n {
            p *= &w;
        }
        for slot in coeffs.iter_mut() {
            *slot += Complex::with_val(wp, &v * &p);
            p *= &winv;
        }
    }
    for slot in coeffs.iter_mut() {
        *slot /= nodes as u32;
    }
    LaurentData { c: c.clone(), radius: r.clone(), order, coeffs }
}

struct Setup<'a> {
    f: &'a Integrand,
    a: Float,
    b: Float,
    c: Float,
    n: u32,
    r: Float,
    wp: u32,
    laurent: LaurentData,
    /// Roots of unity ω for the derivative contour, with ω^{−i} for i < n.
    roots: Vec<Complex>,
    root_inv_pows: Vec<Vec<Complex>>,
}

fn roots_of_unity(count: usize, wp: u32) -> Vec<Complex> {
    let p2 = Float::with_val(wp, pi(wp) * 2u32);
    (0..count)
        .map(|m| {
            let th = Float::with_val(wp, &p2 * m as u32) / count as u32;
            Complex::with_val(wp, (th.clone().cos(), th.sin()))
        })
        .collect()
}

impl<'a> Setup<'a> {
    fn new(f: &'a Integrand, a: &Float, b: &Float, c: &Float, n: u32, prec: u32) -> Result<Self> {
        if !(a < c && c < b) {
            return Err(QmfError::Unsupported("pole must lie strictly inside the interval".into()));
        }
        if n == 0 {
            return Err(QmfError::Unsupported("pole order must be positive".into()));
        }
        let cf = c.to_f64();
        let mut far = f.holo_radius;
        for (p, _) in &f.poles {
            let d = (p.to_f64() - cf).abs();
            if d > 1e-12 {
                if p > a && p < b {
                    return Err(QmfError::Partition("more than one pole in the interval".into()));
                }
                far = far.min(d);
            }
        }
        let mut r = (far / 2.0).min((b.to_f64() - a.to_f64()) / 4.0);
        r = r.min((cf - a.to_f64()).min(b.to_f64() - cf) / 2.0);
        let wp = prec + 32;
        let r = Float::with_val(wp, r);
        let laurent = laurent_at(f, c, &r, n, (wp / 3 + 8) as usize, wp);
        let roots = roots_of_unity(wp as usize / 2 + 24, wp);
        let root_inv_pows = (0..n as i32).map(|i| roots.iter().map(|w| Complex::with_val(wp, w.pow_ref_i(-i))).collect()).collect();
        Ok(Setup { f, a: Float::with_val(wp, a), b: Float::with_val(wp, b), c: Float::with_val(wp, c), n, r, wp, laurent, roots, root_inv_pows })
    }

    fn cx(&self, x: &Float) -> Complex {
        Complex::with_val(self.wp, x)
    }

    fn near(&self, u: &Complex) -> bool {
        abs(u) < self.r.to_f64() / 4.0
    }

    /// f minus its singular part; Taylor series near c avoids cancellation.
    fn g(&self, t: &Complex) -> Complex {
        let u = Complex::with_val(self.wp, t - &self.c);
        if self.near(&u) {
            self.laurent.regular(&u)
        } else {
            self.f.eval(t, self.wp) - self.laurent.singular(&u)
        }
    }

    /// F(t) = f(t)(t−c)^n.
    fn big_f(&self, t: &Complex) -> Complex {
        let u = Complex::with_val(self.wp, t - &self.c);
        if self.near(&u) {
            let mut s = Complex::new(self.wp);
            for j in (-(self.n as i64)..=self.laurent.max_index()).rev() {
                s *= &u;
                s += self.laurent.coeff(j);
            }
            s
        } else {
            let mut p = Complex::with_val(self.wp, 1);
            for _ in 0..self.n {
                p *= &u;
            }
            self.f.eval(t, self.wp) * p
        }
    }

    /// F^{(i)}(x) by a Cauchy integral on |t − x| = ρ.
    fn big_f_deriv(&self, x: &Complex, i: u32, rho: &Float) -> Complex {
        if i == 0 {
            return self.big_f(x);
        }
        let wp = self.wp;
        let mut acc = Complex::new(wp);
        for (w, wi) in self.roots.iter().zip(&self.root_inv_pows[i as usize]) {
            let t = Complex::with_val(wp, Complex::with_val(wp, w * rho) + x);
            acc += self.big_f(&t) * wi;
        }
        let rp = Float::with_val(wp, rho.pow_ref_i(i as i32));
        acc * Float::with_val(wp, factorial(i)) / rp / self.roots.len() as u32
    }

    /// Finite part of ∫_a^b (t−c)^{−j} dt.
    fn fp_power(&self, j: u32) -> Complex {
        let wp = self.wp;
        let bc = Float::with_val(wp, &self.b - &self.c);
        let ac = Float::with_val(wp, &self.a - &self.c);
        if j == 1 {
            let ca = Float::with_val(wp, -&ac);
            return Complex::with_val(wp, Float::with_val(wp, bc / ca).ln());
        }
        let e = 1 - j as i32;
        let v = Float::with_val(wp, bc.pow_ref_i(e)) - Float::with_val(wp, ac.pow_ref_i(e));
        Complex::with_val(wp, v / e)
    }

    fn finite_part(&self) -> Complex {
        let mut s = quad(|t| self.g(t), &self.cx(&self.a), &self.cx(&self.b), self.wp);
        for j in 1..=self.n {
            s += self.laurent.coeff(-(j as i64)) * self.fp_power(j);
        }
        s
    }

    fn contour_mean(&self) -> Complex {
        let wp = self.wp;
        let cm = Float::with_val(wp, &self.c - &self.r);
        let cp = Float::with_val(wp, &self.c + &self.r);
        let mut s = quad(|t| self.f.eval(t, wp), &self.cx(&self.a), &self.cx(&cm), wp);
        s += quad(|t| self.f.eval(t, wp), &self.cx(&cp), &self.cx(&self.b), wp);
        let arc = |th: &Complex| {
            let e = Complex::with_val(wp, Complex::with_val(wp, (0, 1)) * th).exp();
            let t = Complex::with_val(wp, Complex::with_val(wp, &e * &self.r) + &self.c);
            self.f.eval(&t, wp) * Complex::with_val(wp, (0, 1)) * e * &self.r
        };
        let p = Complex::with_val(wp, pi(wp));
        let zero = Complex::new(wp);
        let up = quad(arc, &p, &zero, wp);
        let down = quad(arc, &Complex::with_val(wp, -&p), &zero, wp);
        s + Complex::with_val(wp, up + down) / 2u32
    }

    fn riesz(&self) -> Complex {
        let wp = self.wp;
        let left = Float::with_val(wp, &self.c - &self.a);
        let right = Float::with_val(wp, &self.b - &self.c);
        let zero = Complex::new(wp);
        // level chosen for the most singular weight on the s-circle
        let rho_s = Float::with_val(wp, Float::i_exp(1, -8));
        let worst = Complex::with_val(wp, -&rho_s);
        let probe = |u: &Complex, sign: i32| {
            let t = Complex::with_val(wp, Complex::with_val(wp, u * sign) + &self.c);
            Complex::with_val(wp, Complex::with_val(wp, u.ln_ref()) * &worst).exp() * self.g(&t)
        };
        let (_, lv_l) = quad_with_level(&|u: &Complex| probe(u, -1), &zero, &self.cx(&left), wp);
        let (_, lv_r) = quad_with_level(&|u: &Complex| probe(u, 1), &zero, &self.cx(&right), wp);
        let mut pts: Vec<(Float, Complex)> = Vec::new();
        for (len, sign, lv) in [(&left, -1, lv_l), (&right, 1, lv_r)] {
            for (u, w) in rule(&zero, &self.cx(len), lv + 1, wp) {
                let t = Complex::with_val(wp, Complex::with_val(wp, &u * sign) + &self.c);
                let lu = Float::with_val(wp, u.real().ln_ref());
                pts.push((lu, w * self.g(&t)));
            }
        }
        let m = (wp / 8 + 8) as usize;
        let mut acc = Complex::new(wp);
        for unit in roots_of_unity(m, wp) {
            let s = unit * &rho_s;
            let mut val = Complex::new(wp);
            for (lu, wg) in &pts {
                val += Complex::with_val(wp, &s * lu).exp() * wg;
            }
            // closed-form Riesz integrals of the singular part
            for j in 1..=self.n {
                let e = Complex::with_val(wp, &s + (1 - j as i32));
                let lp = Complex::with_val(wp, Complex::with_val(wp, &e * Float::with_val(wp, left.ln_ref())).exp());
                let rp = Complex::with_val(wp, Complex::with_val(wp, &e * Float::with_val(wp, right.ln_ref())).exp());
                let num = if j % 2 == 0 { lp + rp } else { rp - lp };
                val += Complex::with_val(wp, num / &e) * self.laurent.coeff(-(j as i64));
            }
            acc += val;
        }
        acc / m as u32
    }

    fn distribution_pairing(&self) -> Complex {
        // Σ_{i≤n−2} (n−i−2)!/(n−1)! [F^{(i)}(a)/(a−c)^{n−1−i} − F^{(i)}(b)/(b−c)^{n−1−i}]
        //   + PV ∫ F^{(n−1)}(t)/(t−c) dt/(n−1)!
        let wp = self.wp;
        let m = self.n - 1;
        let rho = Float::with_val(wp, (self.f.holo_radius / 2.0).min(0.5));
        let mfact = Float::with_val(wp, factorial(m));
        let a = self.cx(&self.a);
        let b = self.cx(&self.b);
        let ac = Complex::with_val(wp, &a - &self.c);
        let bc = Complex::with_val(wp, &b - &self.c);
        let mut s = Complex::new(wp);
        for i in 0..m {
            let coef = Float::with_val(wp, factorial(m - i - 1)) / &mfact;
            let fa = self.big_f_deriv(&a, i, &rho);
            let fb = self.big_f_deriv(&b, i, &rho);
            let e = (m - i) as i32;
            let ta = fa / Complex::with_val(wp, (&ac).pow_ref_i(e));
            let tb = fb / Complex::with_val(wp, (&bc).pow_ref_i(e));
            s += Complex::with_val(wp, ta - tb) * coef;
        }
        // PV ∫ G(t)/(t−c) = ∫ (G(t) − G(c))/(t−c) + G(c) ln((b−c)/(c−a)), G = F^{(m)}
        let n = self.n as i64;
        let gc = self.laurent.coeff(-1) * &mfact;
        let quotient = |t: &Complex| {
            let u = Complex::with_val(wp, t - &self.c);
            if self.near(&u) {
                let mut acc = Complex::new(wp);
                let top = self.laurent.max_index() + n;
                for j in ((m as i64 + 1)..=top).rev() {
                    acc *= &u;
                    let ff = Float::with_val(wp, factorial(j as u32)) / Float::with_val(wp, factorial((j - m as i64) as u32));
                    acc += self.laurent.coeff(j - n) * ff;
                }
                acc
            } else {
                Complex::with_val(wp, self.big_f_deriv(t, m, &rho) - &gc) / u
            }
        };
        let pv = quad(quotient, &a, &b, wp) + Complex::with_val(wp, &gc * self.fp_power(1));
        s + pv / mfact
    }

    fn sokhotski(&self) -> Complex {
        // I(u) = ∫F(t)/(t−u)^n dt is holomorphic off [a,b]; its boundary value at c from
        // above is the Taylor series about u₀ = c + iη₀ summed at c, and likewise from below:
        // I(c) = Σ_k C(n+k−1,k)(c−u₀)^k ∫F(t)/(t−u₀)^{n+k} dt.
        let n = self.n;
        let wp0 = self.wp;
        let reach = (self.c.to_f64() - self.a.to_f64()).min(self.b.to_f64() - self.c.to_f64());
        let eta0 = self.r.to_f64().min(reach / 32.0);
        let ratio = eta0 / (reach * reach + eta0 * eta0).sqrt();
        let kmax = ((wp0 as f64 + 16.0) / -ratio.log2() * 1.1) as u32 + 8;
        let guard = 16 + (n as f64 * ((kmax as f64) / eta0).log2()) as u32;
        let wp = wp0 + guard;
        let c = Complex::with_val(wp, &self.c);
        let eta = Float::with_val(wp, eta0);
        let side = |sign: i32| {
            let ieta = Complex::with_val(wp, (0, Float::with_val(wp, &eta * sign)));
            let u0 = Complex::with_val(wp, &c + &ieta);
            let h = |t: &Complex| {
                let w = Complex::with_val(wp, Complex::with_val(wp, t - &u0).recip_ref());
                let z = -Complex::with_val(wp, &ieta * &w);
                let mut coef = Float::with_val(wp, 1);
                let mut zk = Complex::with_val(wp, 1);
                let mut p = Complex::with_val(wp, 1);
                for k in 1..=kmax {
                    coef *= n + k - 1;
                    coef /= k;
                    zk *= &z;
                    p += Complex::with_val(wp, &zk * &coef);
                }
                self.big_f(t) * Complex::with_val(wp, (&w).pow_ref_i(n as i32)) * p
            };
            // t = c + η₀ tan φ makes the oscillation of z^k uniform in φ
            let g = |phi: &Complex| {
                let tn = Complex::with_val(wp, phi.tan_ref());
                let t = Complex::with_val(wp, Complex::with_val(wp, &tn * &eta) + &c);
                let sec2 = Complex::with_val(wp, &tn * &tn) + 1u32;
                h(&t) * sec2 * &eta
            };
            let lo = Complex::with_val(wp, Float::with_val(wp, Float::with_val(wp, &self.a - &self.c) / &eta).atan());
            let hi = Complex::with_val(wp, Float::with_val(wp, Float::with_val(wp, &self.b - &self.c) / &eta).atan());
            let zero = Complex::new(wp);
            quad(g, &lo, &zero, wp0) + quad(g, &zero, &hi, wp0)
        };
        Complex::with_val(wp0, side(1) + side(-1)) / 2u32
    }
}

trait PowI {
    fn pow_ref_i(&self, e: i32) -> Self;
}

impl PowI for Float {
    fn pow_ref_i(&self, e: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

impl PowI for Complex {
    fn pow_ref_i(&self, e: i32) -> Complex {
        use rug::ops::Pow;
        Complex::with_val(self.prec(), self.pow(e))
    }
}

/// Finite-part value of ∫_a^b f across the pole c of order n.
pub fn hadamard_fp(f: &Integrand, a: &Float, b: &Float, c: &Float, n: u32, prec: u32) -> Result<Complex> {
    hadamard_method(f, a, b, c, n, HadamardMethod::FinitePart, prec)
}

/// The regularized integral computed by the chosen method.
pub fn hadamard_method(f: &Integrand, a: &Float, b: &Float, c: &Float, n: u32, method: HadamardMethod, prec: u32) -> Result<Complex> {
    let s = Setup::new(f, a, b, c, n, prec)?;
    let v = match method {
        HadamardMethod::Riesz => s.riesz(),
        HadamardMethod::ContourMean => s.contour_mean(),
        HadamardMethod::FinitePart => s.finite_part(),
        HadamardMethod::DistributionPairing => s.distribution_pairing(),
        HadamardMethod::Sokhotski => s.sokhotski(),
    };
    Ok(Complex::with_val(prec, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(x: f64) -> Float {
        Float::with_val(300, x)
    }

    fn power_pole(n: u32) -> Integrand {
        Integrand::new(move |t: &Complex, p: u32| {
            let u = Complex::with_val(p, t - 1u32);
            Complex::with_val(p, (&u).pow_ref_i(n as i32)).recip()
        })
        .with_pole(fl(1.0), n)
    }

    fn diff(a: &Complex, b: &Complex) -> f64 {
        abs(&Complex::with_val(a.prec().0.max(b.prec().0), a - b))
    }

    #[test]
    fn simple_and_double_pole() {
        let prec = 256;
        let v = hadamard_fp(&power_pole(1), &fl(0.0), &fl(2.0), &fl(1.0), 1, prec).unwrap();
        assert!(abs(&v) < 1e-60);
        let v = hadamard_fp(&power_pole(2), &fl(0.0), &fl(2.0), &fl(1.0), 2, prec).unwrap();
        assert!(diff(&v, &Complex::with_val(prec, -2)) < 1e-60);
    }

    #[test]
    fn methods_on_double_pole() {
        let prec = 256;
        let f = power_pole(2);
        for m in [HadamardMethod::ContourMean, HadamardMethod::FinitePart, HadamardMethod::DistributionPairing, HadamardMethod::Sokhotski] {
            let v = hadamard_method(&f, &fl(0.0), &fl(2.0), &fl(1.0), 2, m, prec).unwrap();
            assert!(diff(&v, &Complex::with_val(prec, -2)) < 1e-30, "{m:?}: {v}");
        }
        let v = hadamard_method(&power_pole(1), &fl(0.0), &fl(2.0), &fl(1.0), 1, HadamardMethod::ContourMean, prec).unwrap();
        assert!(abs(&v) < 1e-30);
        let riesz = hadamard_method(&f, &fl(0.0), &fl(2.0), &fl(1.0), 2, HadamardMethod::Riesz, prec).unwrap();
        assert!(diff(&riesz, &Complex::with_val(prec, -2)) < 1e-30);
    }

    #[test]
    fn principal_value_oracle() {
        // PV ∫_0^2 e^{−t}/(t−1) dt by symmetric excision: ∫_0^1 (e^{−1−u} − e^{−1+u})/u du
        let prec = 200;
        let f = Integrand::new(|t: &Complex, p: u32| Complex::with_val(p, Complex::with_val(p, -t).exp() / Complex::with_val(p, t - 1u32))).with_pole(fl(1.0), 1);
        let v = hadamard_fp(&f, &fl(0.0), &fl(2.0), &fl(1.0), 1, prec).unwrap();
        let zero = Complex::new(prec);
        let one = Complex::with_val(prec, 1);
        let pv = super::quad(
            |u: &Complex| {
                let e1 = Complex::with_val(prec, Complex::with_val(prec, -1 - u.clone()).exp());
                let e2 = Complex::with_val(prec, Complex::with_val(prec, u - 1u32).exp());
                if u.is_zero() {
                    return Complex::with_val(prec, Float::with_val(prec, -1).exp() * -2i32);
                }
                Complex::with_val(prec, e1 - e2) / u
            },
            &zero,
            &one,
            prec,
        );
        assert!(diff(&v, &pv) < 1e-45, "{v} vs {pv}");
    }

    #[test]
    fn endpoint_pole_is_unsupported() {
        let r = hadamard_fp(&power_pole(1), &fl(1.0), &fl(2.0), &fl(1.0), 1, 64);
        assert!(matches!(r, Err(QmfError::Unsupported(_))));
    }

    #[test]
    fn linearity() {
        let prec = 200;
        let g = Integrand::new(|t: &Complex, p: u32| {
            let u = Complex::with_val(p, t - 1u32);
            Complex::with_val(p, t.cos_ref()) / Complex::with_val(p, &u * &u) + Complex::with_val(p, u.recip_ref()) * 3u32
        })
        .with_pole(fl(1.0), 2);
        let v = hadamard_fp(&g, &fl(0.0), &fl(2.0), &fl(1.0), 2, prec).unwrap();
        let h = Integrand::new(|t: &Complex, p: u32| {
            let u = Complex::with_val(p, t - 1u32);
            Complex::with_val(p, t.cos_ref()) / Complex::with_val(p, &u * &u)
        })
        .with_pole(fl(1.0), 2);
        let w = hadamard_fp(&h, &fl(0.0), &fl(2.0), &fl(1.0), 2, prec).unwrap();
        // the 3/(t−1) part contributes 3·ln 1 = 0
        assert!(diff(&v, &w) < 1e-50);
    }
}
