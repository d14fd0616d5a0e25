use super::hadamard::hadamard_fp;
use super::quad::quad;
use super::{FourierTail, Growth, Integrand};
use crate::error::{QmfError, Result};
use crate::specfun::{pi, upper_gamma, BranchConfig};
use rug::{Complex, Float};

fn check_growth(f: &Integrand, tail: &FourierTail) -> Result<()> {
    let rate = tail.rate();
    let ok = match f.growth {
        Growth::Polynomial => rate == 0.0,
        Growth::LinearExponential(r) => rate <= r * (1.0 + 1e-12),
    };
    if ok {
        Ok(())
    } else {
        Err(QmfError::Growth(format!("expansion grows like exp({rate:.4} t), beyond the declared class {:?}", f.growth)))
    }
}

/// ∫_{t₀}^{∞,*} t^{s−1}·t^{p} Σ a(n)e^{−2πnt} dt
/// = −a(0)t₀^σ/σ + Σ_{n≠0} a(n)Γ(σ, 2πnt₀)/(2πn)^σ with σ = s + p.
pub fn tail_integral(tail: &FourierTail, t0: &Float, s: &Complex, prec: u32, branch: &BranchConfig) -> Result<Complex> {
    let wp = prec + 16;
    let sigma = Complex::with_val(wp, s + &tail.power);
    let t0 = Float::with_val(wp, t0);
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let mut acc = Complex::new(wp);
    for (n, a) in &tail.terms {
        if a.is_zero() {
            continue;
        }
        if *n == 0 {
            if sigma.is_zero() {
                return Err(QmfError::Inapplicable("regularized integral has a pole at this s".into()));
            }
            let t0s = Complex::with_val(wp, Complex::with_val(wp, &sigma * Float::with_val(wp, t0.ln_ref())).exp());
            acc -= Complex::with_val(wp, a * t0s) / &sigma;
            continue;
        }
        let rate = Complex::with_val(wp, Float::with_val(wp, &two_pi * *n));
        let z = Complex::with_val(wp, &rate * &t0);
        let g = upper_gamma(&sigma, &z, wp, branch)?;
        let pw = Complex::with_val(wp, branch.ln(&rate)? * &sigma).exp();
        acc += Complex::with_val(wp, a * g) / pw;
    }
    Ok(Complex::with_val(prec, acc))
}

/// Regularized ∫_{t₀}^{∞,*} f(t)t^{s−1}dt for an integrand with a Fourier-type expansion at ∞.
pub fn reg_integral_infinity(f: &Integrand, t0: &Float, s: &Complex, prec: u32, branch: &BranchConfig) -> Result<Complex> {
    let tail = f.at_infinity.as_ref().ok_or_else(|| QmfError::Unsupported("integrand has no expansion at infinity".into()))?;
    check_growth(f, tail)?;
    tail_integral(tail, t0, s, prec, branch)
}

/// Regularized ∫_0^{∞,*} f(t)dt over the partition a₁ < … < a_n: the endpoint
/// pieces use the expansions at 0 and ∞, each inner interval holds at most one pole.
pub fn reg_integral_zero_infinity(f: &Integrand, partition: &[Float], prec: u32, branch: &BranchConfig) -> Result<Complex> {
    if partition.is_empty() || partition.windows(2).any(|w| w[0] >= w[1]) || partition[0] <= 0 {
        return Err(QmfError::Partition("partition points must be positive and increasing".into()));
    }
    let first = &partition[0];
    let last = &partition[partition.len() - 1];
    for (p, _) in &f.poles {
        if partition.iter().any(|a| a == p) {
            return Err(QmfError::Partition("pole at a partition point".into()));
        }
        if p < first || p > last {
            return Err(QmfError::Partition("pole outside the partitioned range".into()));
        }
    }
    let wp = prec + 16;
    let one = Complex::with_val(wp, 1);
    let mut acc = reg_integral_infinity(f, last, &one, wp, branch)?;
    let zero_tail = f.at_zero.as_ref().ok_or_else(|| QmfError::Unsupported("integrand has no expansion at 0".into()))?;
    let inv = Float::with_val(wp, first.recip_ref());
    acc += tail_integral(zero_tail, &inv, &one, wp, branch)?;
    for w in partition.windows(2) {
        let inside: Vec<_> = f.poles.iter().filter(|(p, _)| *p > w[0] && *p < w[1]).collect();
        match inside.len() {
            0 => acc += quad(|t| f.eval(t, wp), &Complex::with_val(wp, &w[0]), &Complex::with_val(wp, &w[1]), wp),
            1 => acc += hadamard_fp(f, &w[0], &w[1], &inside[0].0, inside[0].1, wp)?,
            _ => return Err(QmfError::Partition("two poles in one interval".into())),
        }
    }
    Ok(Complex::with_val(prec, acc))
}
