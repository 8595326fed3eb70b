//! Reed-Solomon codes over prime fields and the insdel codes carved out of
//! them: restrict to the lambda-nonrepeating codewords, then take a greedy
//! independent set in the graph joining codewords at edit distance below `d`.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::bound::{Approx, BoundKind, BoundValue};
use crate::code::{Code, PairDistance};
use crate::combinat::{choose, is_prime, pow, Integer};
use crate::error::{domain, Error, Result};
use crate::words::{
    check_enum_cap, is_lambda_nonrepeating, lcs_bitparallel, lcs_slices, match_masks, Word, DEFAULT_ENUM_CAP,
};

/// Largest `q^k` for which [`gamma_max_degree_bruteforce`] compares all pairs.
pub const GAMMA_PAIR_CAP: u128 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSSpec {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub eval_points: Vec<u64>,
}

impl RSSpec {
    /// Evaluation points default to `0, 1, ..., n-1`.
    pub fn new(q: u64, n: u64, k: u64, eval_points: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Unsupported(format!("q must be prime, got {q}")));
        }
        if n < 1 || n > q {
            return domain(format!("need 1 <= n <= q, got n = {n}, q = {q}"));
        }
        if k < 1 || k > n {
            return domain(format!("need 1 <= k <= n, got k = {k}"));
        }
        let eval_points = eval_points.unwrap_or_else(|| (0..n).collect());
        if eval_points.len() as u64 != n {
            return domain(format!("expected {n} evaluation points, got {}", eval_points.len()));
        }
        if eval_points.iter().any(|&a| a >= q) || eval_points.iter().collect::<HashSet<_>>().len() != eval_points.len()
        {
            return domain("evaluation points must be distinct field elements");
        }
        Ok(Self { q, n, k, eval_points })
    }

    /// Codeword for the coefficient tuple with lexicographic rank `idx`
    /// (the constant coefficient is most significant).
    pub fn codeword(&self, mut idx: u64) -> Word {
        let mut coeffs = vec![0u64; self.k as usize];
        for c in coeffs.iter_mut().rev() {
            *c = idx % self.q;
            idx /= self.q;
        }
        let symbols = self
            .eval_points
            .iter()
            .map(|&a| coeffs.iter().rev().fold(0u64, |acc, &c| (acc * a + c) % self.q) as u32)
            .collect();
        Word::new(symbols, self.q as u32).expect("reduced mod q")
    }

    fn size(&self) -> u128 {
        (self.q as u128).pow(self.k as u32)
    }
}

/// All `q^k` codewords in coefficient order.
pub fn rs_generate(spec: &RSSpec) -> Result<Vec<Word>> {
    check_enum_cap(spec.k as usize, spec.q as u32, DEFAULT_ENUM_CAP, "Reed-Solomon codewords")?;
    Ok((0..spec.size() as u64).into_par_iter().map(|i| spec.codeword(i)).collect())
}

fn mod_pow(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

/// The unique codeword taking `values[i]` at coordinate `positions[i]`, by
/// Lagrange interpolation through `k` distinct evaluation points.
pub fn interpolate(spec: &RSSpec, positions: &[usize], values: &[u64]) -> Result<Word> {
    let q = spec.q;
    if positions.len() as u64 != spec.k || values.len() != positions.len() {
        return domain(format!("need exactly k = {} positions and values", spec.k));
    }
    if positions.iter().any(|&p| p >= spec.n as usize)
        || positions.iter().collect::<HashSet<_>>().len() != positions.len()
    {
        return domain("positions must be distinct coordinates");
    }
    let xs: Vec<u64> = positions.iter().map(|&p| spec.eval_points[p]).collect();
    let symbols = spec
        .eval_points
        .iter()
        .map(|&x| {
            let mut acc = 0;
            for (i, (&xi, &yi)) in xs.iter().zip(values).enumerate() {
                let mut num = 1;
                let mut den = 1;
                for (j, &xj) in xs.iter().enumerate() {
                    if i != j {
                        num = num * ((x + q - xj) % q) % q;
                        den = den * ((xi + q - xj) % q) % q;
                    }
                }
                acc = (acc + yi % q * num % q * mod_pow(den, q - 2, q)) % q;
            }
            acc as u32
        })
        .collect();
    Word::new(symbols, q as u32)
}

/// Codewords with two equal length-`lambda` windows.
pub fn count_lambda_repeating(spec: &RSSpec, lambda: u64) -> Result<Integer> {
    if lambda < 1 || lambda > spec.n {
        return domain(format!("lambda must lie in [1, n], got {lambda}"));
    }
    let words = rs_generate(spec)?;
    let count =
        words.par_iter().filter(|w| !is_lambda_nonrepeating(w, lambda as usize).expect("lambda checked")).count();
    Ok(Integer::from(count))
}

/// `C(n,2) q^{k-lambda}`, the bound on lambda-repeating codewords for
/// `1 <= lambda <= (k-1)/2`.
pub fn lambda_repeating_bound(n: u64, q: u64, k: u64, lambda: u64) -> Option<Integer> {
    if lambda < 1 || 2 * lambda + 1 > k {
        return None;
    }
    Some(choose(n, 2) * pow(q, (k - lambda) as u32))
}

/// `C(n, n-d/2+1)^2`, a `q`-free strict bound on degrees in the conflict
/// graph of an RS code with `k = n-d/2+1`.
pub fn gamma_degree_bound(n: u64, d: u64) -> Result<Integer> {
    if d % 2 == 1 || d < 4 || d > 2 * n - 2 {
        return domain(format!("need even d in [4, 2n-2], got {d}"));
    }
    let c = choose(n, (n - d / 2 + 1) as i64);
    Ok(&c * &c)
}

/// Maximum degree in the graph on the codewords of `spec` joining pairs at
/// edit distance at most `d - 2`.
pub fn gamma_max_degree_bruteforce(spec: &RSSpec, d: u64) -> Result<usize> {
    check_enum_cap(spec.k as usize, spec.q as u32, GAMMA_PAIR_CAP, "conflict graph pairs")?;
    let words = rs_generate(spec)?;
    let pd = PairDistance::new(&words, spec.q as u32);
    let n = spec.n as usize;
    Ok((0..words.len())
        .into_par_iter()
        .map(|i| (0..words.len()).filter(|&j| j != i && 2 * (n - pd.lcs(&words, i, j)) + 2 <= d as usize).count())
        .max()
        .unwrap_or(0))
}

/// `2^{5(d-2)} d (e n/(d-2))^{(3d-6)/2}`, the edge-count estimate inside a
/// neighborhood of the conflict graph. Outside `6 <= d <= n/9 + 2` the value
/// is still returned, marked not applicable (report only).
pub fn neighborhood_edge_bound(n: u64, d: u64) -> BoundValue {
    const NAME: &str = "neighborhood_edges";
    if d < 4 || d % 2 == 1 {
        return BoundValue::not_applicable(NAME, BoundKind::Estimate, "needs even d >= 4");
    }
    let (nf, df) = (n as f64, d as f64);
    let ln = 5.0 * (df - 2.0) * 2f64.ln() + df.ln() + (3.0 * df - 6.0) / 2.0 * (1.0 + nf.ln() - (df - 2.0).ln());
    let mut b = BoundValue::approx(NAME, Approx::from_ln(ln), "asymptotic, not certified");
    if d < 6 || d * 9 > n + 18 {
        b.applicable = false;
        b.condition_note = "report only: outside 6 <= d <= n/9 + 2".into();
    }
    b
}

/// The order in which candidate codewords are offered to the greedy step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderStrategy {
    /// Coefficient order, as generated.
    #[default]
    Generation,
    Reverse,
    /// Stable sort by decreasing number of distinct symbols.
    MostDistinctFirst,
}

impl std::str::FromStr for OrderStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generation" => Ok(Self::Generation),
            "reverse" => Ok(Self::Reverse),
            "most-distinct-first" => Ok(Self::MostDistinctFirst),
            _ => domain(format!("unknown order {s:?}; expected generation, reverse or most-distinct-first")),
        }
    }
}

/// Greedy independent set among the lambda-nonrepeating codewords of an RS
/// code with `k = n - d/2 + 1`: accept a word iff it is at edit distance at
/// least `d` from every word accepted so far.
pub fn construct_insdel_code_rs(spec: &RSSpec, d: u64, lambda: u64, order: OrderStrategy) -> Result<Code> {
    if d % 2 == 1 || d < 2 || d > 2 * spec.n {
        return domain(format!("need even d in [2, 2n], got {d}"));
    }
    if spec.k != spec.n - d / 2 + 1 {
        return Err(Error::Precondition(format!("k must equal n - d/2 + 1 = {}, got {}", spec.n - d / 2 + 1, spec.k)));
    }
    if lambda < 1 || lambda > spec.n {
        return domain(format!("lambda must lie in [1, n], got {lambda}"));
    }
    let mut candidates: Vec<Word> = rs_generate(spec)?
        .into_iter()
        .filter(|w| is_lambda_nonrepeating(w, lambda as usize).expect("lambda checked"))
        .collect();
    match order {
        OrderStrategy::Generation => {}
        OrderStrategy::Reverse => candidates.reverse(),
        OrderStrategy::MostDistinctFirst => candidates.sort_by_key(|w| std::cmp::Reverse(w.support_size())),
    }
    let n = spec.n as usize;
    let q = spec.q as usize;
    let mut accepted: Vec<Word> = Vec::new();
    let mut accepted_bytes: Vec<Vec<u8>> = Vec::new();
    for w in candidates {
        let ok = if n <= 64 {
            let bytes: Vec<u8> = w.symbols().iter().map(|&s| s as u8).collect();
            let masks = match_masks(&bytes, q);
            let ok = accepted_bytes.iter().all(|a| 2 * (n - lcs_bitparallel(&masks, n, a)) >= d as usize);
            if ok {
                accepted_bytes.push(bytes);
            }
            ok
        } else {
            accepted.iter().all(|a| 2 * (n - lcs_slices(a.symbols(), w.symbols())) >= d as usize)
        };
        if ok {
            accepted.push(w);
        }
    }
    let provenance = format!(
        "rs-independent-set q={} n={} k={} lambda={lambda} alpha={:?} order={order:?}",
        spec.q, spec.n, spec.k, spec.eval_points
    );
    Code::new(n, spec.q as u32, accepted, provenance)?.certify(d as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::verify_code_distance;
    use crate::words::{all_words, edit_distance};

    fn spec(q: u64, n: u64, k: u64) -> RSSpec {
        RSSpec::new(q, n, k, None).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(RSSpec::new(6, 4, 2, None), Err(Error::Unsupported(_))));
        assert!(RSSpec::new(5, 6, 2, None).is_err());
        assert!(RSSpec::new(5, 4, 0, None).is_err());
        assert!(RSSpec::new(5, 3, 2, Some(vec![0, 1, 1])).is_err());
        assert!(RSSpec::new(5, 3, 2, Some(vec![0, 1, 5])).is_err());
        assert!(RSSpec::new(5, 3, 2, Some(vec![4, 2, 0])).is_ok());
    }

    #[test]
    fn generation_examples() {
        let words = rs_generate(&spec(5, 4, 1)).unwrap();
        assert_eq!(words.len(), 5);
        assert!(words.iter().all(|w| w.support_size() == 1));
        let words = rs_generate(&spec(3, 3, 2)).unwrap();
        assert_eq!(words.len(), 9);
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                let ham = u.symbols().iter().zip(v.symbols()).filter(|(a, b)| a != b).count();
                assert!(ham >= 2);
            }
        }
        // f = 1 + 2x at 0, 1, 2 over F_3
        assert_eq!(words[5].symbols(), &[1, 0, 2]);
    }

    #[test]
    fn codeword_count_is_q_to_the_k() {
        for (q, n, k) in [(2, 2, 2), (7, 5, 3), (11, 4, 4), (13, 13, 2)] {
            let words = rs_generate(&spec(q, n, k)).unwrap();
            assert_eq!(words.len() as u64, q.pow(k as u32));
            assert_eq!(words.iter().collect::<HashSet<_>>().len(), words.len());
        }
    }

    #[test]
    fn interpolation_property() {
        let s = spec(5, 4, 2);
        let words = rs_generate(&s).unwrap();
        for i in 0..4usize {
            for j in i + 1..4 {
                for a in 0..5u64 {
                    for b in 0..5u64 {
                        let hits: Vec<&Word> =
                            words.iter().filter(|w| w.symbols()[i] as u64 == a && w.symbols()[j] as u64 == b).collect();
                        assert_eq!(hits.len(), 1);
                        assert_eq!(*hits[0], interpolate(&s, &[i, j], &[a, b]).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn interpolation_with_custom_points() {
        let s = RSSpec::new(7, 5, 3, Some(vec![6, 2, 3, 0, 5])).unwrap();
        for w in rs_generate(&s).unwrap().iter().step_by(17) {
            let vals: Vec<u64> = [4, 0, 2].iter().map(|&p| w.symbols()[p] as u64).collect();
            assert_eq!(&interpolate(&s, &[4, 0, 2], &vals).unwrap(), w);
        }
    }

    #[test]
    fn repeating_counts() {
        let s = spec(5, 5, 3);
        let c = count_lambda_repeating(&s, 1).unwrap();
        assert!(c <= Integer::from(250));
        assert_eq!(lambda_repeating_bound(5, 5, 3, 1), Some(Integer::from(250)));
        assert_eq!(count_lambda_repeating(&s, 5).unwrap(), Integer::from(0));
        let c = count_lambda_repeating(&spec(7, 5, 3), 1).unwrap();
        assert!(c <= Integer::from(490));
        assert_eq!(lambda_repeating_bound(5, 7, 3, 1), Some(Integer::from(490)));
        assert!(count_lambda_repeating(&s, 6).is_err());
        assert_eq!(lambda_repeating_bound(5, 5, 2, 1), None);
    }

    #[test]
    fn repeating_count_matches_direct_scan() {
        let s = spec(5, 5, 3);
        let direct = rs_generate(&s)
            .unwrap()
            .iter()
            .filter(|w| {
                let v = w.symbols();
                (0..v.len()).any(|i| (i + 1..v.len()).any(|j| v[i] == v[j]))
            })
            .count();
        assert_eq!(count_lambda_repeating(&s, 1).unwrap(), Integer::from(direct));
    }

    #[test]
    fn gamma_bound_examples() {
        assert_eq!(gamma_degree_bound(4, 6).unwrap(), Integer::from(36));
        assert_eq!(gamma_degree_bound(5, 4).unwrap(), Integer::from(25));
        assert!(gamma_degree_bound(4, 8).is_err());
        assert!(gamma_max_degree_bruteforce(&spec(5, 4, 2), 6).unwrap() < 36);
    }

    #[test]
    fn neighborhood_bound_examples() {
        let b = neighborhood_edge_bound(90, 6);
        assert!(b.applicable);
        let expect = 2f64.powi(20) * 6.0 * (90.0 * std::f64::consts::E / 4.0).powi(6);
        assert!((b.value.clone().unwrap().to_f64() / expect - 1.0).abs() < 1e-12);
        let b = neighborhood_edge_bound(10, 6);
        assert!(!b.applicable && b.value.is_some());
        let v = |n| neighborhood_edge_bound(n, 8).value.unwrap().to_f64();
        for n in 10..60 {
            assert!(v(n + 1) > v(n));
        }
    }

    #[test]
    fn rs_construction_examples() {
        let c = construct_insdel_code_rs(&spec(5, 4, 2), 6, 1, OrderStrategy::Generation).unwrap();
        assert!(!c.is_empty());
        assert_eq!(c.verified_min_edit_distance, Some(6));
        let c = construct_insdel_code_rs(&spec(7, 5, 4), 4, 1, OrderStrategy::Generation).unwrap();
        assert!(verify_code_distance(&c, 4).unwrap().ok);
        assert!(matches!(
            construct_insdel_code_rs(&spec(7, 5, 3), 4, 1, OrderStrategy::Generation),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rs_construction_uses_only_nonrepeating_words() {
        for order in [OrderStrategy::Generation, OrderStrategy::Reverse, OrderStrategy::MostDistinctFirst] {
            let c = construct_insdel_code_rs(&spec(7, 6, 4), 6, 2, order).unwrap();
            for w in &c.words {
                assert!(is_lambda_nonrepeating(w, 2).unwrap());
            }
            for (i, u) in c.words.iter().enumerate() {
                for v in &c.words[i + 1..] {
                    assert!(edit_distance(u, v).unwrap() >= 6);
                }
            }
        }
    }

    #[test]
    fn rs_construction_is_maximal() {
        let s = spec(5, 5, 4);
        let c = construct_insdel_code_rs(&s, 4, 1, OrderStrategy::Generation).unwrap();
        for w in rs_generate(&s).unwrap() {
            if is_lambda_nonrepeating(&w, 1).unwrap() && !c.words.contains(&w) {
                assert!(c.words.iter().any(|a| edit_distance(a, &w).unwrap() < 4));
            }
        }
    }

    #[test]
    fn all_words_vs_rs_for_full_dimension() {
        let words = rs_generate(&spec(3, 3, 3)).unwrap();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, all_words(3, 3).collect::<Vec<_>>());
    }

    #[test]
    fn order_parses() {
        assert_eq!("reverse".parse::<OrderStrategy>().unwrap(), OrderStrategy::Reverse);
        assert!("random".parse::<OrderStrategy>().is_err());
    }
}
