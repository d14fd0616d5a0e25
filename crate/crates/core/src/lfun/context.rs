//! Everything the explicit formula needs for one form: t₀, the pole records of
//! every component and the pole-subtracted expansions on both sides of t₀.

use crate::error::{QmfError, Result};
use crate::forms::QuasiForm;
use crate::poles::tilde::cancellation_bits;
use crate::poles::{find_poles, principal_part, refine_position, tilde_expansion, PolePosition, TildeExpansion, DEFAULT_T_FLOOR};
use crate::specfun::BranchConfig;
use rug::{Complex, Float};

/// Poles closer than this to t₀ or 1/t₀ make t₀ move.
const HEIGHT_GAP: f64 = 0.02;
/// Step of the t₀ nudge.
const NUDGE: f64 = 0.013;
/// Distance kept between the search floor and the lower of t₀, 1/t₀.
const FLOOR_MARGIN: f64 = 0.15;

/// User-facing knobs of an L-value computation.
#[derive(Clone, Debug)]
pub struct LConfig {
    pub t0: f64,
    pub prec: u32,
    /// Fourier truncation; chosen from the working precision when absent.
    pub trunc: Option<i64>,
    pub branch: BranchConfig,
    pub t_floor: f64,
}

impl Default for LConfig {
    fn default() -> Self {
        LConfig { t0: 1.05, prec: 256, trunc: None, branch: BranchConfig::default(), t_floor: DEFAULT_T_FLOOR }
    }
}

/// c·∫_T^{∞,*} g(it) t^{σ−1} dt with σ = offset + sign·s.
#[derive(Clone, Debug)]
pub struct Piece {
    /// Component index r (0 for f itself).
    pub r: usize,
    pub factor: Complex,
    pub offset: i64,
    pub sign: i32,
    pub height: Float,
    pub tilde: TildeExpansion,
}

impl Piece {
    /// σ for a given s.
    pub fn sigma(&self, s: &Complex, wp: u32) -> Complex {
        let t = Complex::with_val(wp, s * self.sign);
        t + self.offset
    }

    /// The integer s where σ = 0.
    pub fn pole_at(&self) -> i64 {
        self.sign as i64 * -self.offset
    }
}

/// A form prepared for L-values: all pieces of Λ(f, s) = Σ factor·A(g, σ, T).
#[derive(Clone, Debug)]
pub struct LContext {
    pub weight: i64,
    pub depth: usize,
    pub t0: Float,
    pub prec: u32,
    pub branch: BranchConfig,
    pub pieces: Vec<Piece>,
}

/// i^e for an integer e.
pub(crate) fn i_pow(e: i64, prec: u32) -> Complex {
    let (re, im) = match e.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Complex::with_val(prec, (re, im))
}

/// The requested t₀, moved in small steps until no pole height sits near t₀ or 1/t₀.
fn nudge(t0: f64, heights: &[f64]) -> Result<f64> {
    let clear = |t: f64| heights.iter().all(|h| (h - t).abs() >= HEIGHT_GAP && (h - 1.0 / t).abs() >= HEIGHT_GAP);
    for j in 0..=8 {
        let step = NUDGE * ((j + 1) / 2) as f64;
        let t = if j % 2 == 1 { t0 + step } else { t0 - step };
        if t > 0.0 && clear(t) {
            return Ok(t);
        }
    }
    Err(QmfError::CaseBoundary)
}

/// Truncation after which |ã(n)|e^{−2πnT} has dropped below 2^{−prec−24},
/// assuming growth no faster than the search floor allows.
fn default_trunc(height: f64, floor: f64, prec: u32) -> i64 {
    let gap = (height - floor).max(0.05);
    let need = (prec as f64 + 24.0) * std::f64::consts::LN_2 + 30.0;
    ((need / (2.0 * std::f64::consts::PI * gap)).ceil() as i64).max(24)
}

impl LContext {
    pub fn new(f: &QuasiForm, cfg: &LConfig) -> Result<Self> {
        if cfg.t0 <= 0.0 {
            return Err(QmfError::Inapplicable("t0 must be positive".into()));
        }
        let lower = cfg.t0.min(1.0 / cfg.t0);
        let floor = (cfg.t_floor.min(lower) - FLOOR_MARGIN).max(0.2);
        let found = find_poles(f, floor, 64)?;
        let heights: Vec<f64> = found.iter().map(|p| p.alpha.imag().to_f64()).collect();
        let t0 = nudge(cfg.t0, &heights)?;
        let k = f.weight();
        let comps = f.components();
        // (r, scalar, form, height, offset, sign)
        let mut specs = vec![(0usize, Complex::with_val(cfg.prec + 32, 1), f.clone(), t0, 0i64, 1i32)];
        for (r, (c, g)) in comps.into_iter().enumerate() {
            let factor = Complex::with_val(cfg.prec + 32, c.to_complex(cfg.prec + 32) * i_pow(k - r as i64, cfg.prec + 32));
            specs.push((r, factor, g, 1.0 / t0, k - r as i64, -1));
        }
        let mut pieces = Vec::new();
        let t0f = Float::with_val(cfg.prec + 32, t0);
        for (r, factor, g, height, offset, sign) in specs {
            if g.is_zero() {
                continue;
            }
            let n = cfg.trunc.unwrap_or_else(|| default_trunc(height, floor, cfg.prec));
            let tilde = component_tilde(f, &g, &found, height, n, cfg.prec)?;
            // the lower height must be the exact reciprocal, not its f64 rounding
            let exact = if sign > 0 { t0f.clone() } else { Float::with_val(cfg.prec + 32, 1u32 / &t0f) };
            pieces.push(Piece { r, factor, offset, sign, height: exact, tilde });
        }
        Ok(LContext { weight: k, depth: f.depth(), t0: t0f, prec: cfg.prec, branch: cfg.branch, pieces })
    }
}

/// f̃ for one component on Im τ ≥ height, with principal parts at the precision the subtraction needs.
fn component_tilde(f: &QuasiForm, g: &QuasiForm, found: &[PolePosition], height: f64, n: i64, prec: u32) -> Result<TildeExpansion> {
    let loss = if found.is_empty() { 0 } else { cancellation_bits(&g.qexp(n), height) };
    let wp = prec + loss + 16;
    let mut records = Vec::new();
    for p in found {
        // f's denominator vanishes at every pole of its components
        let p = refine_position(f, p, wp);
        if let Some(rec) = principal_part(g, &p.alpha, p.multiplicity, wp)?.trimmed() {
            records.push(rec);
        }
    }
    tilde_expansion(g, &records, height, n, prec + 16)
}
