//! Constructive decomposition of a quasi-modular form of weight k into
//! derivatives of modular forms, derivatives of the top-depth spaces
//! QM^{k−2l−1}_{k−2l}, and high derivatives of modular forms.

use super::modular::ModularFn;
use super::quasi::QuasiForm;
use crate::arith::{binom, factorial};
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;
use std::collections::BTreeMap;

/// f = Σ_{first} D^l F + Σ_{middle} D^l h + Σ_{third} D^l F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub weight: i64,
    /// (l, F_{k−2l}) with l ≤ k/2 − 1, F modular.
    pub first: Vec<(u32, QuasiForm)>,
    /// (l, h_l) with h_l of weight k − 2l and depth k − 2l − 1.
    pub middle: Vec<(u32, QuasiForm)>,
    /// (l, F_{k−2l}) with l ≥ k, F modular.
    pub third: Vec<(u32, QuasiForm)>,
}

#[derive(Serialize)]
struct EntryJson {
    l: u32,
    form: String,
}

#[derive(Clone, Copy)]
enum Block {
    First,
    Middle,
    Third,
}

#[derive(Default)]
struct Acc {
    first: BTreeMap<u32, QuasiForm>,
    middle: BTreeMap<u32, QuasiForm>,
    third: BTreeMap<u32, QuasiForm>,
}

impl Acc {
    fn push(&mut self, block: Block, l: u32, f: QuasiForm) {
        let map = match block {
            Block::First => &mut self.first,
            Block::Middle => &mut self.middle,
            Block::Third => &mut self.third,
        };
        let merged = match map.remove(&l) {
            Some(g) => g.add(&f).expect("entries at one l share a weight"),
            None => f,
        };
        if !merged.is_zero() {
            map.insert(l, merged);
        }
    }

    fn entries(&self) -> Vec<(Block, u32, QuasiForm)> {
        let mut v = Vec::new();
        for (b, m) in [(Block::First, &self.first), (Block::Middle, &self.middle), (Block::Third, &self.third)] {
            for (l, f) in m {
                v.push((b, *l, f.clone()));
            }
        }
        v
    }
}

/// The modular F with D^p F having top part g·E₂^p: F = 12^p g / (p!·C(k−p−1, p)),
/// where k is the weight of D^p F. `None` when the binomial vanishes.
fn peel_coefficient(k: i64, p: usize) -> Option<Rational> {
    let c = binom(k - p as i64 - 1, p as i64);
    if c == 0 {
        return None;
    }
    let num = Integer::from(12).pow(p as u32);
    Some(Rational::from((num, factorial(p as u32) * c)))
}

fn claim(f: &QuasiForm, acc: &mut Acc) {
    let k = f.weight();
    let mut f = f.clone();
    while !f.is_zero() {
        let p = f.depth();
        let gp: ModularFn = f.part(p);
        let pi = p as i64;
        if k <= 0 || pi >= k || 2 * pi < k {
            let block = if k > 0 && 2 * pi < k { Block::First } else { Block::Third };
            let c = peel_coefficient(k, p).expect("binomial nonzero outside k/2 ≤ p < k");
            let big_f = QuasiForm::from_modular(gp.scale(&c));
            f = f.sub(&big_f.d_pow(p as u32)).unwrap();
            acc.push(block, p as u32, big_f);
        } else if pi == k - 1 {
            let mut parts = vec![ModularFn::zero(0); p + 1];
            for (i, slot) in parts.iter_mut().enumerate() {
                *slot = ModularFn::zero(k - 2 * i as i64);
            }
            parts[p] = gp;
            let h = QuasiForm::new(parts, k).unwrap();
            f = f.sub(&h).unwrap();
            acc.push(Block::Middle, 0, h);
        } else {
            // D(g E₂^{p−1}) has top part (k−p−1)/12 · g E₂^p
            let mut parts: Vec<ModularFn> = (0..p).map(|i| ModularFn::zero(k - 2 - 2 * i as i64)).collect();
            parts[p - 1] = gp;
            let g = QuasiForm::new(parts, k - 2).unwrap();
            let c = Rational::from((12, k - pi - 1));
            let mut sub = Acc::default();
            claim(&g, &mut sub);
            for (block, l, h) in sub.entries() {
                acc.push(block, l + 1, h.scale(&c));
            }
            f = f.sub(&g.d().scale(&c)).unwrap();
        }
    }
}

/// Splits f into the three blocks; `resynthesize` inverts it exactly.
pub fn decompose(f: &QuasiForm) -> Decomposition {
    let mut acc = Acc::default();
    claim(f, &mut acc);
    let to_vec = |m: BTreeMap<u32, QuasiForm>| m.into_iter().collect::<Vec<_>>();
    Decomposition {
        weight: f.weight(),
        first: to_vec(acc.first),
        middle: to_vec(acc.middle),
        third: to_vec(acc.third),
    }
}

impl Decomposition {
    pub fn resynthesize(&self) -> QuasiForm {
        let mut f = QuasiForm::zero(self.weight);
        for (l, g) in self.first.iter().chain(&self.middle).chain(&self.third) {
            f = f.add(&g.d_pow(*l)).unwrap();
        }
        f
    }

    pub fn to_json(&self) -> serde_json::Value {
        let block = |v: &[(u32, QuasiForm)]| {
            v.iter()
                .map(|(l, f)| EntryJson { l: *l, form: f.to_string() })
                .collect::<Vec<_>>()
        };
        serde_json::json!({
            "weight": self.weight,
            "first": block(&self.first),
            "middle": block(&self.middle),
            "third": block(&self.third),
        })
    }
}

/// Depth of Dᵖ applied to a generic modular form of weight k.
pub fn depth_of_power_d(k: i64, p: i64) -> i64 {
    if k <= 0 && p >= 1 - k {
        p + k - 1
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_delta() -> QuasiForm {
        QuasiForm::delta().pow(-1).unwrap()
    }

    #[test]
    fn modular_goes_to_first_block() {
        let f = QuasiForm::e4();
        let d = decompose(&f);
        assert_eq!(d.first, vec![(0, f)]);
        assert!(d.middle.is_empty() && d.third.is_empty());
    }

    #[test]
    fn e2_and_its_derivative() {
        let d = decompose(&QuasiForm::e2());
        assert_eq!(d.middle, vec![(0, QuasiForm::e2())]);
        let d = decompose(&QuasiForm::e2().d());
        assert_eq!(d.middle, vec![(1, QuasiForm::e2())]);
        assert!(d.first.is_empty() && d.third.is_empty());
    }

    #[test]
    fn round_trips() {
        let e2 = QuasiForm::e2();
        let forms = vec![
            e2.mul(&e2).mul(&e2).mul(&QuasiForm::e4()).div(&QuasiForm::delta()).unwrap(),
            inv_delta().d_pow(3),
            e2.pow(4).unwrap().mul(&QuasiForm::e6()),
            e2.pow(3).unwrap().mul(&QuasiForm::e6()).mul(&inv_delta()).mul(&QuasiForm::e4()).mul(&QuasiForm::e6()),
        ];
        for f in forms {
            let d = decompose(&f);
            assert_eq!(d.resynthesize(), f, "{f}");
        }
    }

    #[test]
    fn middle_block_nonempty_in_window() {
        // k = 10, p = 5 lies in the window k/2 ≤ p < k
        let f = QuasiForm::e2().pow(5).unwrap();
        assert_eq!(f.weight(), 10);
        let d = decompose(&f);
        assert!(!d.middle.is_empty());
        assert_eq!(d.resynthesize(), f);
    }

    #[test]
    fn depth_table() {
        assert_eq!(depth_of_power_d(12, 3), 3);
        assert_eq!(depth_of_power_d(-12, 13), 0);
        assert_eq!(depth_of_power_d(-12, 12), 12);
        for p in 1..=14 {
            assert_eq!(inv_delta().d_pow(p as u32).depth() as i64, depth_of_power_d(-12, p));
            assert_eq!(QuasiForm::delta().d_pow(p as u32).depth() as i64, depth_of_power_d(12, p));
        }
    }
}
