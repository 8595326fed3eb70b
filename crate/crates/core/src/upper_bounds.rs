//! Closed-form upper bounds on `D_q(n, d)`.
//!
//! Every evaluator checks its validity domain first and returns a
//! not-applicable [`BoundValue`] outside it. Floors are taken only where the
//! formula itself has them; otherwise the exact rational is kept and the
//! integer rounding happens in [`BoundValue::integer_value`].

use num_traits::{One, Zero};

use crate::bound::{Approx, BoundKind, BoundValue, Params};
use crate::combinat::{choose, choose_i, falling_factorial, floor, pow, pow_signed, rat, ratio, Integer, Rational};
use crate::error::{Error, Result};

const UPPER: BoundKind = BoundKind::CertifiedUpper;

fn sum_binom_weighted(n: u64, terms: std::ops::RangeInclusive<i64>, q: u64) -> Integer {
    terms.map(|i| choose(n, i) * pow(q - 1, i as u32)).sum()
}

/// Levenshtein's bound for a fixed `r`.
pub fn levenshtein_upper(p: &Params, r: i64) -> BoundValue {
    const NAME: &str = "levenshtein_eq3";
    let (n, q, h) = (p.n as i64, p.q, p.half_d() as i64);
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return BoundValue::not_applicable(NAME, UPPER, "needs 4 <= d <= 2n-2");
    }
    if r < h - 2 || r > n - 1 {
        return BoundValue::not_applicable(NAME, UPPER, format!("r = {r} outside [d/2-2, n-1]"));
    }
    let den: Integer = (0..h).map(|i| choose_i(r + 2 - h, i)).sum();
    let first = Rational::new(pow(q, (n - h + 1) as u32), den);
    let second = Integer::from(q) * sum_binom_weighted(p.n - 1, 0..=r - 1, q);
    BoundValue::exact_value(NAME, UPPER, first + rat(second), format!("r={r}"))
}

/// Levenshtein's bound minimized over every admissible `r`. The second term
/// is a prefix sum in `r`, so it is carried along instead of recomputed.
pub fn levenshtein_upper_best(p: &Params) -> BoundValue {
    const NAME: &str = "levenshtein_best";
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return BoundValue::not_applicable(NAME, UPPER, "needs 4 <= d <= 2n-2");
    }
    let (n, q, h) = (p.n as i64, p.q, p.half_d() as i64);
    let lo = (h - 2).max(0);
    let top = pow(q, (n - h + 1) as u32);
    let mut prefix = sum_binom_weighted(p.n - 1, 0..=lo - 1, q);
    let mut term = choose_i(n - 1, lo) * pow(q - 1, lo as u32);
    // candidates stay unreduced (num, den) with a small den; comparing by
    // cross-multiplication avoids a big gcd per r
    let mut best: Option<(Integer, Integer, i64)> = None;
    for r in lo..n {
        let den: Integer = (0..h).map(|i| choose_i(r + 2 - h, i)).sum();
        let num = &top + Integer::from(q) * &prefix * &den;
        if best.as_ref().is_none_or(|(bn, bd, _)| &num * bd < bn * &den) {
            best = Some((num, den, r));
        }
        // advance prefix to include C(n-1, r) (q-1)^r
        prefix += &term;
        term = term * (n - 1 - r) * (q - 1) / (r + 1);
    }
    let (num, den, r) = best.expect("r range is non-empty");
    BoundValue::exact_value(NAME, UPPER, Rational::new(num, den), format!("r={r}"))
}

/// The lower envelope of Levenshtein's bound over `r`: the first term at
/// `r = n-1` plus the second term at `r = d/2-2`.
pub fn levenshtein_envelope(p: &Params) -> Option<Rational> {
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return None;
    }
    let (n, q, h) = (p.n, p.q, p.half_d() as i64);
    let den: Integer = (0..h).map(|i| choose(n + 1 - h as u64, i)).sum();
    let first = Rational::new(pow(q, (n as i64 - h + 1) as u32), den);
    let second = Integer::from(q) * sum_binom_weighted(n - 1, 0..=h - 3, q);
    Some(first + rat(second))
}

/// `floor(q/n * floor(2(q-1)/(n-1))) + q`, a bound on `D_q(n, 2n-2)`.
pub fn bours_upper(n: u64, q: u64) -> Integer {
    let inner = Integer::from(2 * (q - 1) / (n - 1));
    floor(&Rational::new(Integer::from(q) * inner, Integer::from(n))) + q
}

pub fn bours_bound(p: &Params) -> BoundValue {
    const NAME: &str = "bours_eq4";
    if p.d != 2 * p.n - 2 {
        return BoundValue::not_applicable(NAME, UPPER, "only for d = 2n-2");
    }
    BoundValue::exact_value(NAME, UPPER, rat(bours_upper(p.n, p.q)), "d=2n-2")
}

/// Sum of `num/den` pairs as an unreduced fraction, combined pairwise so the
/// operands stay balanced; reducing once at the end avoids a gcd per term.
fn sum_fractions(terms: &[(Integer, Integer)]) -> (Integer, Integer) {
    match terms {
        [] => (Integer::zero(), Integer::one()),
        [t] => t.clone(),
        _ => {
            let (a, b) = terms.split_at(terms.len() / 2);
            let ((an, ad), (bn, bd)) = (sum_fractions(a), sum_fractions(b));
            (an * &bd + bn * &ad, ad * bd)
        }
    }
}

/// The piecewise `delta(r, m)`.
fn kk_delta(r: i64, m: i64) -> Integer {
    if m < 0 || m > r {
        Integer::zero()
    } else if m == r {
        Integer::one()
    } else {
        (0..=m).map(|i| choose_i(r - m, i)).sum()
    }
}

/// Kulkarni-Kiyavash bound, valid for `4 <= d <= n+1`.
pub fn kk_upper(p: &Params) -> BoundValue {
    const NAME: &str = "kk_eq5";
    if p.d < 4 || p.d > p.n + 1 {
        return BoundValue::not_applicable(NAME, UPPER, "needs 4 <= d <= n+1");
    }
    let (n, q, d) = (p.n as i64, p.q, p.d as i64);
    let h = d / 2;
    // terms grouped by denominator; the denominators take few distinct values
    let mut by_den: std::collections::BTreeMap<Integer, Integer> = Default::default();
    let mut weight = Integer::from(q) * (q - 1) * (q - 1) * choose_i(n - h, 2);
    for r in 3..=(n - h + 1) {
        // delta vanishes below 0, so the range starts there at the latest
        let lo = (d + r - n - 3).max(0);
        let hi = (h - 3).min(r - 3);
        // an inverted range is an empty sum
        let inner: Integer = (lo..=hi).map(|i| kk_delta(r - 2, i)).sum();
        let den = kk_delta(r, h - 1) + inner;
        if den.is_zero() {
            return BoundValue::not_applicable(
                NAME,
                UPPER,
                format!("zero denominator at r = {r}; the bound is vacuous here"),
            );
        }
        *by_den.entry(den).or_default() += &weight;
        // weight = q (q-1)^{r-1} C(n-h, r-1), advanced to r+1
        weight = weight * (q - 1) * (n - h - r + 1) / r;
    }
    let terms: Vec<(Integer, Integer)> = by_den.into_iter().map(|(den, num)| (num, den)).collect();
    let (num, den) = sum_fractions(&terms);
    let total = Rational::new(num, den);
    let tail: Integer = (1..=2).map(|r| choose_i(n - h, r - 1) * pow(q - 1, (r - 1) as u32)).sum::<Integer>() * q;
    BoundValue::exact_value(NAME, UPPER, total + rat(tail), "4<=d<=n+1")
}

/// `q + 2q(q-1)/(n(n-1))`, the bound on `D_q(n, 2n-2)` from the LP dual.
pub fn thm25_eq7(n: u64, q: u64) -> Rational {
    rat(q) + ratio(2 * q * (q - 1), n * (n - 1))
}

/// `3q^2 - q + q(q-1)(q-2)/C(n,3)`, the bound on `D_q(n, 2n-4)`.
pub fn thm25_eq8(n: u64, q: u64) -> Rational {
    let q_i = Integer::from(q);
    rat(&q_i * &q_i * 3u32 - &q_i) + Rational::new(falling_factorial(q, 3), choose(n, 3))
}

/// The leading term of [`thm25_eq6`], without the `U_{n,q,d}` correction.
pub fn thm25_eq6_main(n: u64, q: u64, d: u64) -> Rational {
    let s = n - d / 2;
    let c = choose(n, (s + 1) as i64);
    Rational::new(falling_factorial(q, s + 1), c.clone())
        + Rational::new(falling_factorial(q, s) * (s + 1) * (n - 1), c * 2u32)
}

/// The general bound for `4 <= d <= 2n-6`, main term plus `U_{n,q,d}`.
///
/// The main-term factor `(1 + (s+1)(n-1)/(2(q-s)))` is multiplied through,
/// cancelling `(q - s)` against the falling factorial, so `q = s` is finite.
pub fn thm25_eq6(n: u64, q: u64, d: u64) -> Rational {
    let s = n - d / 2;
    let h = (s + 2) / 2;
    let main = thm25_eq6_main(n, q, d);
    let mut u = Rational::zero();
    // C(q, j) vanishes for j > q
    for j in (h + 1)..s.min(q + 1) {
        let den = choose(n + 2 * j - 2 * (s + 1), (2 * j - (s + 1)) as i64);
        u += Rational::new(choose(q, j as i64) * pow(j, (s + 1) as u32), den);
    }
    for j in 1..=h.min(q) {
        u += rat(choose(q, j as i64) * pow(j, (s + 1) as u32));
    }
    main + u
}

/// The LP-dual bounds: `thm25_eq7` at `d = 2n-2`, `thm25_eq8` at `d = 2n-4`, `thm25_eq6` below.
pub fn thm25_upper(p: &Params) -> BoundValue {
    let (n, q, d) = (p.n, p.q, p.d);
    if d < 4 || d > 2 * n - 2 {
        return BoundValue::not_applicable("thm25", UPPER, "needs 4 <= d <= 2n-2");
    }
    if d == 2 * n - 2 {
        BoundValue::exact_value("thm25_eq7", UPPER, thm25_eq7(n, q), "d=2n-2")
    } else if d == 2 * n - 4 {
        BoundValue::exact_value("thm25_eq8", UPPER, thm25_eq8(n, q), "d=2n-4")
    } else {
        BoundValue::exact_value("thm25_eq6", UPPER, thm25_eq6(n, q, d), "4<=d<=2n-6")
    }
}

/// Liu-Xing: exact at `d = 2` and `d = 2n`, otherwise the smaller of the
/// Singleton-type bounds that apply.
pub fn liu_xing_upper(p: &Params) -> BoundValue {
    const NAME: &str = "liu_xing";
    let (n, q, d) = (p.n, p.q, p.d);
    if d == 2 {
        return BoundValue::exact_value(NAME, BoundKind::Exact, rat(pow(q, n as u32)), "D_q(n,2) = q^n");
    }
    if d == 2 * n {
        return BoundValue::exact_value(NAME, BoundKind::Exact, rat(q), "D_q(n,2n) = q");
    }
    let e = (n - d / 2) as u32;
    let mut best = Rational::new(pow(q, e + 1) + pow(q, e), Integer::from(2));
    let mut note = "item 2";
    if 2 * q <= d {
        let item3 = rat(pow(q, e));
        if item3 < best {
            best = item3;
            note = "item 3";
        }
    }
    BoundValue::exact_value(NAME, UPPER, best, note)
}

/// The two branches inside the improved Liu-Xing minimum.
pub fn improved_liu_xing_branches(p: &Params) -> Option<(Rational, Rational)> {
    let (n, q, d) = (p.n, p.q, p.d);
    if d < 4 || d + 4 > 2 * n {
        return None;
    }
    let scale = rat(pow(q, (n - d / 2 - 1) as u32));
    let inner = Integer::from(4 * (q - 1) / d);
    let first = floor(&Rational::new(inner * (2 * q), Integer::from(d + 2))) + q;
    let second = ratio(48 * (q - 1) * (q - 2), (d + 4) * (d + 2) * d) + rat(3 * q - 1);
    Some((&scale * rat(first), scale * second))
}

pub fn improved_liu_xing_upper(p: &Params) -> BoundValue {
    const NAME: &str = "improved_liu_xing";
    match improved_liu_xing_branches(p) {
        None => BoundValue::not_applicable(NAME, UPPER, "needs 4 <= d <= 2n-4"),
        Some((a, b)) => {
            let note = if a <= b { "i=1 branch" } else { "i=2 branch" };
            BoundValue::exact_value(NAME, UPPER, a.min(b), note)
        }
    }
}

/// Lifts a bound on `D_q(d/2 + i, d)` to `D_q(n, d)` by `q^{n-d/2-i}`.
pub fn recursive_upper(p: &Params, i: u64, base: &BoundValue) -> Result<BoundValue> {
    const NAME: &str = "recursive";
    let (n, q, d) = (p.n, p.q, p.d);
    if d < 4 || d > 2 * n - 2 || i < 1 || i > n - d / 2 {
        return Ok(BoundValue::not_applicable(NAME, UPPER, "needs 4 <= d <= 2n-2, 1 <= i <= n-d/2"));
    }
    let value = match (base.is_upper(), base.rational()) {
        (true, Some(v)) => v.clone(),
        _ => return Err(Error::Precondition("base must be an applicable exact-valued upper bound".into())),
    };
    if value < rat(pow(q, i as u32)) {
        return Err(Error::Precondition(format!("base value {value} is below q^i = {}", pow(q, i as u32))));
    }
    let lifted = rat(pow(q, (n - d / 2 - i) as u32)) * value;
    Ok(BoundValue::exact_value(NAME, UPPER, lifted, format!("i={i} from {}", base.name)))
}

/// `q^{n - d/2 - d/(2q-2)} (q + 2)` for `q | n`, `2q-2 <= d <= 2n - 2n/q`.
/// Exact only when `d/(2q-2)` is an integer; otherwise a real-valued estimate.
pub fn lwgz_upper(p: &Params) -> BoundValue {
    const NAME: &str = "lwgz";
    let (n, q, d) = (p.n, p.q, p.d);
    if n % q != 0 || d + 2 < 2 * q || d > 2 * n - 2 * n / q {
        return BoundValue::not_applicable(NAME, UPPER, "needs q | n and 2q-2 <= d <= 2n-2n/q");
    }
    let step = 2 * q - 2;
    if d % step == 0 {
        let e = (n - d / 2) as i64 - (d / step) as i64;
        BoundValue::exact_value(NAME, UPPER, pow_signed(q, e) * rat(q + 2), "integral exponent")
    } else {
        let e = (n - d / 2) as f64 - d as f64 / step as f64;
        let ln = ((q + 2) as f64).ln() + e * (q as f64).ln();
        BoundValue::approx(NAME, Approx::from_ln(ln), "non-integral exponent d/(2q-2)")
    }
}

/// Every closed-form upper bound of this module at `p`.
pub fn all_upper_bounds(p: &Params) -> Vec<BoundValue> {
    let mut v = vec![
        levenshtein_upper_best(p),
        bours_bound(p),
        kk_upper(p),
        thm25_upper(p),
        liu_xing_upper(p),
        improved_liu_xing_upper(p),
        lwgz_upper(p),
    ];
    if p.d == 2 || p.d == 2 * p.n {
        v.retain(|b| b.name == "liu_xing" || b.applicable);
    }
    v
}

/// Smallest integer value among the applicable certified bounds of
/// [`all_upper_bounds`]. The note lists every bound attaining it.
pub fn best_upper(p: &Params) -> BoundValue {
    const NAME: &str = "best_upper";
    let bounds: Vec<BoundValue> = all_upper_bounds(p).into_iter().filter(|b| b.is_upper()).collect();
    let best = bounds.iter().filter_map(|b| b.integer_value.clone()).min().expect("liu_xing always applies");
    let attaining: Vec<&BoundValue> = bounds.iter().filter(|b| b.integer_value.as_ref() == Some(&best)).collect();
    let kind = if attaining.iter().any(|b| b.kind == BoundKind::Exact) { BoundKind::Exact } else { UPPER };
    let names: Vec<&str> = attaining.iter().map(|b| b.name.as_str()).collect();
    BoundValue::exact_value(NAME, kind, rat(best), names.join(","))
}
