//! Lower bounds on `D_q(n, d)`: the GV-type counting bound, the deletion
//! hypergraph with its degree/codegree and a greedy matching, and the
//! asymptotic estimates, which are always reported as [`BoundKind::Estimate`].

use rayon::prelude::*;

use crate::bound::{Approx, BoundKind, BoundValue, Params};
use crate::code::{Code, PairDistance};
use crate::combinat::{choose, is_prime_power, log10_abs, pow, rat, Integer, Rational};
use crate::error::{domain, Error, Result};
use crate::words::{all_words, check_enum_cap, insertion_sphere, word_index, Word, DEFAULT_ENUM_CAP};

/// Largest `q^n` accepted by [`count_good_triples_bruteforce`].
pub const TRIPLE_CAP: u128 = 1 << 12;

/// The deletion hypergraph: vertices `[q]^{n-t}`, one edge `S_D(u, t)` per
/// `u` in `[q]^n`. Its matchings are exactly the `t`-deletion-correcting codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypergraphSpec {
    pub n: u64,
    pub q: u64,
    pub t: u64,
}

impl HypergraphSpec {
    pub fn new(n: u64, q: u64, t: u64) -> Result<Self> {
        if q < 2 {
            return domain(format!("q must be at least 2, got {q}"));
        }
        if t < 1 || t >= n {
            return domain(format!("t must lie in [1, n-1], got t = {t}, n = {n}"));
        }
        Ok(Self { n, q, t })
    }
}

/// `q^{n+d/2-1} / (sum_{i<d/2} C(n,i)(q-1)^i)^2`.
pub fn gv_lower(p: &Params) -> BoundValue {
    const NAME: &str = "gv";
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return BoundValue::not_applicable(NAME, BoundKind::CertifiedLower, "needs 4 <= d <= 2n-2");
    }
    let (n, q, h) = (p.n, p.q, p.half_d());
    let den: Integer = (0..h).map(|i| choose(n, i as i64) * pow(q - 1, i as u32)).sum();
    let value = Rational::new(pow(q, (n + h - 1) as u32), &den * &den);
    BoundValue::exact_value(NAME, BoundKind::CertifiedLower, value, "counting bound")
}

/// Maximum vertex degree, `sum_{i<=t} C(n,i)(q-1)^i`; every vertex attains it.
pub fn hypergraph_degree(h: &HypergraphSpec) -> Integer {
    (0..=h.t).map(|i| choose(h.n, i as i64) * pow(h.q - 1, i as u32)).sum()
}

/// Maximum codegree, `sum_{i<t} C(n,i)(q-1)^i (1 - (-1)^{t-i})`.
pub fn hypergraph_codegree(h: &HypergraphSpec) -> Integer {
    (0..h.t).filter(|i| (h.t - i) % 2 == 1).map(|i| choose(h.n, i as i64) * pow(h.q - 1, i as u32) * 2u32).sum()
}

fn vertex_spheres(h: &HypergraphSpec) -> Result<Vec<Vec<usize>>> {
    let m = (h.n - h.t) as usize;
    check_enum_cap(h.n as usize, h.q as u32, DEFAULT_ENUM_CAP, "hypergraph edges")?;
    Ok(all_words(m, h.q as u32)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|v| insertion_sphere(v, h.t as usize).iter().map(|u| word_index(u.symbols(), h.q as u32)).collect())
        .collect())
}

/// Maximum degree by listing, for every vertex, the edges through it.
pub fn hypergraph_degree_bruteforce(h: &HypergraphSpec) -> Result<Integer> {
    let spheres = vertex_spheres(h)?;
    Ok(Integer::from(spheres.iter().map(Vec::len).max().unwrap_or(0)))
}

/// Maximum codegree over all pairs of distinct vertices.
pub fn hypergraph_codegree_bruteforce(h: &HypergraphSpec) -> Result<Integer> {
    let spheres = vertex_spheres(h)?;
    let best = (0..spheres.len())
        .into_par_iter()
        .map(|i| (i + 1..spheres.len()).map(|j| sorted_intersection_len(&spheres[i], &spheres[j])).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    Ok(Integer::from(best))
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// Indices (in `[q]^{len-t}`) of every subsequence of `symbols` of length
/// `len - t`, with repeats.
fn deletion_indices(symbols: &[u32], t: usize, q: u32, out: &mut Vec<usize>) {
    fn rec(symbols: &[u32], start: usize, left: usize, acc: usize, q: usize, out: &mut Vec<usize>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=symbols.len() - left {
            rec(symbols, i + 1, left - 1, acc * q + symbols[i] as usize, q, out);
        }
    }
    rec(symbols, 0, symbols.len() - t, 0, q as usize, out);
}

/// Scans `u` in lexicographic order and keeps it when `S_D(u, t)` misses
/// every sphere kept so far. The result is a maximal matching, so its
/// centers form a verified `(n, 2t+2)_q` code.
pub fn greedy_matching_code(h: &HypergraphSpec) -> Result<Code> {
    let (n, q, t) = (h.n as usize, h.q as u32, h.t as usize);
    check_enum_cap(n, q, DEFAULT_ENUM_CAP, "greedy matching scan")?;
    let mut claimed = vec![false; (q as usize).pow((n - t) as u32)];
    let mut words = Vec::new();
    let mut sphere = Vec::new();
    for u in all_words(n, q) {
        sphere.clear();
        deletion_indices(u.symbols(), t, q, &mut sphere);
        if sphere.iter().all(|&v| !claimed[v]) {
            for &v in &sphere {
                claimed[v] = true;
            }
            words.push(u);
        }
    }
    Code::new(n, q, words, format!("greedy matching, t={t}"))?.certify(2 * t + 2)
}

/// `q^{n-d/2+1} / C(n, d/2-1)`, the shared leading term of the matching
/// lower bound and the upper bounds for fixed `n`, large `q`.
pub fn matching_main_term(p: &Params) -> BoundValue {
    const NAME: &str = "matching_main_term";
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return BoundValue::not_applicable(NAME, BoundKind::Estimate, "needs 4 <= d <= 2n-2");
    }
    let h = p.half_d();
    let value = Rational::new(pow(p.q, (p.n - h + 1) as u32), choose(p.n, h as i64 - 1));
    BoundValue::exact_value(NAME, BoundKind::Estimate, value, "asymptotic main term, not certified")
}

/// `ln C(n, k)`, exact binomial then logarithm.
fn ln_choose(n: u64, k: u64) -> f64 {
    log10_abs(&rat(choose(n, k as i64))) * std::f64::consts::LN_10
}

fn signed_approx(factor: f64, ln_magnitude: f64) -> Approx {
    let ln10 = std::f64::consts::LN_10;
    Approx { value: factor * ln_magnitude.exp(), log10_abs: factor.abs().log10() + ln_magnitude / ln10 }
}

/// `(d/2-1)(ln n - ln(d-2) - 8.1) q^{n-d/2+1} / C(n, d/2-1)^2`, evaluated
/// whatever the parameters (the factor can be negative at small `n`).
pub fn refined_gv_eq19_value(p: &Params) -> Option<Approx> {
    let (n, q, d) = (p.n, p.q, p.d);
    if d < 6 || d > 2 * n - 2 {
        return None;
    }
    let h = d / 2;
    let factor = (h - 1) as f64 * ((n as f64).ln() - ((d - 2) as f64).ln() - 8.1);
    let ln_mag = (n - h + 1) as f64 * (q as f64).ln() - 2.0 * ln_choose(n, h - 1);
    Some(signed_approx(factor, ln_mag))
}

/// `(d/2-1) q^{n-d/2+1} log2(n) / n^{d-2}`.
pub fn refined_gv_eq20_value(p: &Params) -> Option<Approx> {
    let (n, q, d) = (p.n, p.q, p.d);
    if d < 6 || d > 2 * n - 2 {
        return None;
    }
    let h = d / 2;
    let ln_mag = ((h - 1) as f64).ln() + (n - h + 1) as f64 * (q as f64).ln() + (n as f64).log2().ln()
        - (d - 2) as f64 * (n as f64).ln();
    Some(Approx::from_ln(ln_mag))
}

/// The logarithmic-improvement estimates. The first branch needs
/// `q >= n` a prime power and `6 <= d < n/e^{8.1} + 2`; the second only `d >= 6`.
pub fn refined_gv_estimate(p: &Params) -> BoundValue {
    let (n, q, d) = (p.n, p.q, p.d);
    let first_branch = q >= n && is_prime_power(q) && d >= 6 && (d as f64) < n as f64 / 8.1f64.exp() + 2.0;
    if first_branch {
        if let Some(v) = refined_gv_eq19_value(p) {
            return BoundValue::approx("refined_gv_eq19", v, "asymptotic, not certified");
        }
    }
    match refined_gv_eq20_value(p) {
        Some(v) => BoundValue::approx("refined_gv_eq20", v, "asymptotic, not certified"),
        None => BoundValue::not_applicable("refined_gv", BoundKind::Estimate, "needs 6 <= d <= 2n-2"),
    }
}

/// `n^{a+b+c} q^{n+2b+2c} (66a)^{2b+2c+1} (log2 n)^{2b+2c} + 3 q^{n+2a} n^{-4a}`,
/// the triangle-count estimate with its `o(1)` factors dropped.
pub fn triangle_bound_eval(n: u64, q: u64, a: u64, b: u64, c: u64) -> Result<BoundValue> {
    if !(n >= a && a >= b && b >= c && c >= 1) {
        return domain(format!("need n >= a >= b >= c >= 1, got n={n} a={a} b={b} c={c}"));
    }
    let (nf, qf) = (n as f64, q as f64);
    let e = (2 * b + 2 * c) as f64;
    let first = (a + b + c) as f64 * nf.ln()
        + (n as f64 + e) * qf.ln()
        + (e + 1.0) * (66.0 * a as f64).ln()
        + e * nf.log2().ln();
    let second = 3f64.ln() + (n + 2 * a) as f64 * qf.ln() - 4.0 * a as f64 * nf.ln();
    let hi = first.max(second);
    let lo = first.min(second);
    let ln_sum = if lo == f64::NEG_INFINITY { hi } else { hi + (lo - hi).exp().ln_1p() };
    Ok(BoundValue::approx("triangle_bound", Approx::from_ln(ln_sum), "asymptotic, not certified"))
}

/// Exact number of ordered triples `(u, v, w)` in `([q]^n)^3` with
/// `d(u,v) <= a`, `d(u,w) <= b`, `d(v,w) <= c`.
pub fn count_good_triples_bruteforce(n: u64, q: u64, a: u64, b: u64, c: u64) -> Result<Integer> {
    check_enum_cap(n as usize, q as u32, TRIPLE_CAP, "triple enumeration")?;
    let words: Vec<Word> = all_words(n as usize, q as u32).collect();
    let m = words.len();
    let pd = PairDistance::new(&words, q as u32);
    let dist: Vec<Vec<usize>> =
        (0..m).into_par_iter().map(|i| (0..m).map(|j| 2 * (n as usize - pd.lcs(&words, i, j))).collect()).collect();
    let blocks = m.div_ceil(64);
    let within = |r: u64| -> Vec<Vec<u64>> {
        dist.iter()
            .map(|row| {
                let mut bits = vec![0u64; blocks];
                for (j, &dj) in row.iter().enumerate() {
                    if dj as u64 <= r {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                }
                bits
            })
            .collect()
    };
    let (near_b, near_c) = (within(b), within(c));
    let total: u64 = (0..m)
        .into_par_iter()
        .map(|u| {
            (0..m)
                .filter(|&v| dist[u][v] as u64 <= a)
                .map(|v| near_b[u].iter().zip(&near_c[v]).map(|(x, y)| (x & y).count_ones() as u64).sum::<u64>())
                .sum::<u64>()
        })
        .sum();
    Ok(Integer::from(total))
}

/// Greedy-matching size next to the counting bound, for reports.
pub fn greedy_vs_gv(p: &Params) -> Result<(usize, Option<Integer>)> {
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return Err(Error::Domain("needs 4 <= d <= 2n-2".into()));
    }
    let code = greedy_matching_code(&HypergraphSpec::new(p.n, p.q, p.t())?)?;
    Ok((code.len(), gv_lower(p).integer_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::ratio;
    use crate::upper_bounds::best_upper;
    use crate::words::edit_distance;

    fn p(n: u64, q: u64, d: u64) -> Params {
        Params::new(n, q, d).unwrap()
    }

    fn hs(n: u64, q: u64, t: u64) -> HypergraphSpec {
        HypergraphSpec::new(n, q, t).unwrap()
    }

    #[test]
    fn gv_examples() {
        let b = gv_lower(&p(4, 2, 4));
        assert_eq!((b.rational().cloned(), b.integer_value.clone()), (Some(ratio(32, 25)), Some(Integer::from(2))));
        assert_eq!(gv_lower(&p(5, 2, 4)).rational(), Some(&ratio(16, 9)));
        assert_eq!(gv_lower(&p(3, 2, 4)).rational(), Some(&rat(1)));
        assert!(!gv_lower(&p(3, 2, 6)).applicable);
        assert!(!gv_lower(&p(3, 2, 2)).applicable);
    }

    #[test]
    fn degree_and_codegree_examples() {
        assert_eq!(hypergraph_degree(&hs(3, 2, 1)), Integer::from(4));
        assert_eq!(hypergraph_degree(&hs(4, 3, 1)), Integer::from(9));
        assert_eq!(hypergraph_codegree(&hs(3, 2, 1)), Integer::from(2));
        assert_eq!(hypergraph_codegree(&hs(4, 2, 2)), Integer::from(8));
        assert!(HypergraphSpec::new(3, 2, 3).is_err());
        assert!(HypergraphSpec::new(3, 2, 0).is_err());
    }

    #[test]
    fn closed_forms_match_brute_force() {
        for n in 2..=6u64 {
            for q in 2..=3u64 {
                for t in 1..=2u64.min(n - 1) {
                    let h = hs(n, q, t);
                    assert_eq!(hypergraph_degree(&h), hypergraph_degree_bruteforce(&h).unwrap(), "{h:?}");
                    assert_eq!(hypergraph_codegree(&h), hypergraph_codegree_bruteforce(&h).unwrap(), "{h:?}");
                    assert!(hypergraph_codegree(&h) < hypergraph_degree(&h));
                }
            }
        }
        for n in 2..=4u64 {
            for q in 2..=3u64 {
                let h = hs(n, q, n - 1);
                assert_eq!(hypergraph_degree(&h), hypergraph_degree_bruteforce(&h).unwrap());
            }
        }
    }

    #[test]
    fn codegree_ratio_shrinks_with_q() {
        for n in 3..=8u64 {
            for t in 1..=2u64.min(n - 1) {
                let ratio_at = |q| Rational::new(hypergraph_codegree(&hs(n, q, t)), hypergraph_degree(&hs(n, q, t)));
                assert!(ratio_at(64) < ratio_at(2));
            }
        }
    }

    #[test]
    fn greedy_examples() {
        let c = greedy_matching_code(&hs(3, 2, 1)).unwrap();
        let got: Vec<String> = c.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["0 0 0", "0 1 1"]);
        assert_eq!(c.verified_min_edit_distance, Some(4));
        let c = greedy_matching_code(&hs(4, 2, 1)).unwrap();
        assert!(Integer::from(c.len()) >= gv_lower(&p(4, 2, 4)).integer_value.unwrap());
    }

    #[test]
    fn greedy_spheres_are_disjoint() {
        for (n, q, t) in [(4, 3, 1), (5, 2, 2), (6, 2, 1), (5, 3, 2)] {
            let c = greedy_matching_code(&hs(n, q, t)).unwrap();
            for (i, u) in c.words.iter().enumerate() {
                for v in &c.words[i + 1..] {
                    assert!(edit_distance(u, v).unwrap() >= 2 * t as usize + 2);
                }
            }
            let pp = p(n, q, 2 * t + 2);
            assert!(Integer::from(c.len()) <= best_upper(&pp).integer_value.unwrap());
        }
    }

    #[test]
    fn greedy_respects_cap() {
        assert!(matches!(greedy_matching_code(&hs(21, 2, 1)), Err(Error::Resource { .. })));
    }

    #[test]
    fn main_term_examples() {
        let b = matching_main_term(&p(4, 100, 4));
        assert_eq!((b.kind, b.rational().cloned()), (BoundKind::Estimate, Some(rat(250000))));
        assert_eq!(b.integer_value, None);
        assert_eq!(matching_main_term(&p(4, 4, 6)).rational(), Some(&ratio(8, 3)));
    }

    #[test]
    fn main_term_sits_between_gv_and_best_upper_for_large_q() {
        for n in 3..=6 {
            for q in [50u64, 64, 101, 128] {
                for d in (4..=2 * n - 2).step_by(2) {
                    let pp = p(n, q, d);
                    let m = matching_main_term(&pp).rational().cloned().unwrap();
                    assert!(gv_lower(&pp).rational().unwrap() <= &m, "{pp}");
                    assert!(m <= rat(best_upper(&pp).integer_value.unwrap()), "{pp}");
                }
            }
        }
    }

    #[test]
    fn refined_estimates() {
        let b = refined_gv_estimate(&p(100, 2, 6));
        assert_eq!((b.name.as_str(), b.kind), ("refined_gv_eq20", BoundKind::Estimate));
        let expect = 2.0 * 2f64.powi(98) * 100f64.log2() / 1e8;
        let got = b.value.unwrap().to_f64();
        assert!((got / expect - 1.0).abs() < 1e-12);
        assert!(!refined_gv_estimate(&p(100, 2, 4)).applicable);
        // the first branch needs n > e^{8.1}(d-2), around 13175 for d = 6
        assert_eq!(refined_gv_estimate(&p(200, 211, 6)).name, "refined_gv_eq20");
        let b = refined_gv_estimate(&p(14000, 16384, 6));
        assert_eq!(b.name, "refined_gv_eq19");
        assert!(b.value.unwrap().to_f64() > 0.0);
        let v = refined_gv_eq19_value(&p(100, 101, 6)).unwrap();
        assert!(v.value < 0.0);
    }

    #[test]
    fn triangle_examples() {
        let b = triangle_bound_eval(10, 2, 1, 1, 1).unwrap();
        let l = 10f64.log2();
        let expect = 1e3 * 2f64.powi(14) * 66f64.powi(5) * l.powi(4) + 3.0 * 2f64.powi(12) * 1e-4;
        assert!((b.value.unwrap().to_f64() / expect - 1.0).abs() < 1e-12);
        assert!(triangle_bound_eval(10, 2, 2, 1, 3).is_err());
        assert!(triangle_bound_eval(10, 2, 1, 1, 0).is_err());
        assert!(triangle_bound_eval(1, 2, 2, 1, 1).is_err());
    }

    #[test]
    fn triangle_bound_is_monotone() {
        let v = |a, b, c| triangle_bound_eval(12, 3, a, b, c).unwrap().value.unwrap().to_f64();
        for a in 1..=4 {
            for b in 1..=a {
                for c in 1..=b {
                    if a < 4 {
                        assert!(v(a + 1, b, c) > v(a, b, c));
                    }
                    if b < a {
                        assert!(v(a, b + 1, c) > v(a, b, c));
                    }
                    if c < b {
                        assert!(v(a, b, c + 1) > v(a, b, c));
                    }
                }
            }
        }
    }

    fn triple_oracle(n: u64, q: u64, a: usize, b: usize, c: usize) -> u64 {
        let words: Vec<Word> = all_words(n as usize, q as u32).collect();
        let mut count = 0;
        for u in &words {
            for v in &words {
                for w in &words {
                    let d = |x: &Word, y: &Word| edit_distance(x, y).unwrap();
                    if d(u, v) <= a && d(u, w) <= b && d(v, w) <= c {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn triples_examples() {
        assert_eq!(count_good_triples_bruteforce(3, 2, 0, 0, 0).unwrap(), Integer::from(8));
        assert_eq!(count_good_triples_bruteforce(3, 2, 6, 6, 6).unwrap(), Integer::from(512));
        let got = count_good_triples_bruteforce(3, 2, 2, 2, 2).unwrap();
        assert_eq!(got, Integer::from(triple_oracle(3, 2, 2, 2, 2)));
        assert_eq!(count_good_triples_bruteforce(3, 3, 4, 2, 2).unwrap(), Integer::from(triple_oracle(3, 3, 4, 2, 2)));
        assert!(count_good_triples_bruteforce(13, 2, 1, 1, 1).is_err());
    }

    #[test]
    fn triples_count_is_symmetric_in_the_radii() {
        // swapping the roles of u, v, w permutes (a, b, c)
        for (n, q) in [(3, 2), (3, 3), (4, 2)] {
            let base = count_good_triples_bruteforce(n, q, 4, 2, 0).unwrap();
            for (a, b, c) in [(4, 0, 2), (2, 4, 0), (2, 0, 4), (0, 4, 2), (0, 2, 4)] {
                assert_eq!(count_good_triples_bruteforce(n, q, a, b, c).unwrap(), base);
            }
        }
    }
}
