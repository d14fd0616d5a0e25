//! Exact combinatorial helpers: binomials with negative tops, factorials, Bernoulli numbers.

use rug::ops::Pow;
use rug::{Integer, Rational};
use std::sync::{Mutex, OnceLock};

/// C(a, b) with C(a, b) = 0 for b < 0 and the falling-factorial product otherwise,
/// so negative `a` is allowed.
pub fn binom(a: i64, b: i64) -> Integer {
    if b < 0 {
        return Integer::new();
    }
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for j in 0..b {
        num *= a - j;
        den *= j + 1;
    }
    num / den
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Falling product (x)_m = x (x-1) ... (x-m+1) for integer x.
pub fn falling(x: i64, m: u32) -> Integer {
    let mut r = Integer::from(1);
    for j in 0..m as i64 {
        r *= x - j;
    }
    r
}

static BERNOULLI: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    let cell = BERNOULLI.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut tab = cell.lock().unwrap();
    while tab.len() <= n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = tab.len();
        let mut acc = Rational::new();
        for (j, b) in tab.iter().enumerate() {
            acc += Rational::from(binom(m as i64 + 1, j as i64)) * b;
        }
        acc /= -(m as i64 + 1);
        tab.push(acc);
    }
    tab[n].clone()
}

/// Sum of the (k)-th powers of the divisors of n.
pub fn sigma(k: u32, n: u64) -> Integer {
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}
