//! Exact integer and rational arithmetic plus the counting functions the
//! bound formulas are built from.
//!
//! `Integer` and `Rational` are `num-bigint` / `num-rational` types. A
//! `BigRational` is reduced on construction, so equality is value equality.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `n choose k` for any integer `k`; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<Integer> {
    if n < 0 {
        return domain(format!("binomial: negative n = {n}"));
    }
    Ok(choose(n as u64, k))
}

/// Infallible binomial for a non-negative top.
pub fn choose(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial with a possibly negative top, using the same zero convention.
/// Every formula in this crate that can produce a negative top wants 0 there.
pub fn choose_i(n: i64, k: i64) -> Integer {
    if n < 0 {
        Integer::zero()
    } else {
        choose(n as u64, k)
    }
}

pub fn pow(base: u64, exp: u32) -> Integer {
    Pow::pow(Integer::from(base), exp)
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, i| acc * i)
}

/// `q (q-1) ... (q-k+1)`.
pub fn falling_factorial(q: u64, k: u64) -> Integer {
    (0..k).fold(Integer::one(), |acc, i| acc * (Integer::from(q) - i))
}

/// Number of surjections from an `m`-set onto a `j`-set, by inclusion-exclusion.
///
/// Equals the sum of multinomials `(m; c_1, ..., c_j)` over positive
/// compositions of `m` into `j` parts, i.e. `j! S(m, j)`.
pub fn surjection_count(m: u32, j: u32) -> Integer {
    if j > m {
        return Integer::zero();
    }
    let mut acc = Integer::zero();
    for i in 0..=j {
        let term = choose(j as u64, i as i64) * pow((j - i) as u64, m);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn rat(n: impl Into<Integer>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(num: impl Into<Integer>, den: impl Into<Integer>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn floor(x: &Rational) -> Integer {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> Integer {
    x.numer().div_ceil(x.denom())
}

/// `q^e` for a possibly negative exponent.
pub fn pow_signed(q: u64, e: i64) -> Rational {
    if e >= 0 {
        rat(pow(q, e as u32))
    } else {
        Rational::new(Integer::one(), pow(q, (-e) as u32))
    }
}

/// Best-effort conversion to `f64` that does not overflow for huge operands.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let l = log10_abs(x);
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * 10f64.powf(l)
}

/// `log10 |x|` for a nonzero rational, robust to very large numerators.
pub fn log10_abs(x: &Rational) -> f64 {
    log10_int(x.numer()) - log10_int(x.denom())
}

fn log10_int(x: &Integer) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).log10();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(0.0);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= q {
        if q.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}
