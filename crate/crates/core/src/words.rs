//! Words over `[q] = {0, ..., q-1}`, LCS-based edit distance, deletion and
//! insertion spheres, editing balls, and the insertion/deletion operation
//! sequences with their lambda-isolated / lambda-nonrepeating predicates.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{choose, pow, Integer};
use crate::error::{domain, Error, Result};

/// Default cap on `q^n` for anything that scans all of `[q]^n`.
pub const DEFAULT_ENUM_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    symbols: Vec<u32>,
    q: u32,
}

impl Word {
    pub fn new(symbols: Vec<u32>, q: u32) -> Result<Self> {
        if q < 2 {
            return domain(format!("alphabet size must be at least 2, got {q}"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return domain(format!("symbol {s} outside alphabet of size {q}"));
        }
        Ok(Self { symbols, q })
    }

    /// Constructor for callers that already guarantee `s < q` for every symbol.
    pub(crate) fn from_raw(symbols: Vec<u32>, q: u32) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        Self { symbols, q }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of distinct symbols, `|N(u)|`.
    pub fn support_size(&self) -> usize {
        self.symbols.iter().collect::<HashSet<_>>().len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn same_alphabet(x: &Word, y: &Word) -> Result<()> {
    if x.q != y.q {
        return domain(format!("alphabet mismatch: {} vs {}", x.q, y.q));
    }
    Ok(())
}

/// LCS length of two symbol slices, row-rolling dynamic programming.
pub fn lcs_slices<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    let mut row = vec![0usize; y.len() + 1];
    for a in x {
        let mut diag = 0;
        for (j, b) in y.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if a == b { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[y.len()]
}

pub fn lcs(x: &Word, y: &Word) -> Result<usize> {
    same_alphabet(x, y)?;
    Ok(lcs_slices(&x.symbols, &y.symbols))
}

/// `len(x) + len(y) - 2 LCS(x, y)`.
pub fn edit_distance(x: &Word, y: &Word) -> Result<usize> {
    Ok(x.len() + y.len() - 2 * lcs(x, y)?)
}

/// Bit-parallel LCS for a pattern of at most 64 symbols.
///
/// `masks[c]` has bit `i` set iff `pattern[i] == c`; see [`match_masks`].
pub fn lcs_bitparallel(masks: &[u64], pattern_len: usize, text: &[u8]) -> usize {
    debug_assert!(pattern_len <= 64);
    if pattern_len == 0 {
        return 0;
    }
    let full = if pattern_len == 64 { u64::MAX } else { (1u64 << pattern_len) - 1 };
    let mut v = full;
    for &c in text {
        let m = masks.get(c as usize).copied().unwrap_or(0);
        let u = v & m;
        v = (v.wrapping_add(u) | (v - u)) & full;
    }
    pattern_len - v.count_ones() as usize
}

pub fn match_masks(pattern: &[u8], q: usize) -> Vec<u64> {
    let mut masks = vec![0u64; q];
    for (i, &c) in pattern.iter().enumerate() {
        masks[c as usize] |= 1 << i;
    }
    masks
}

/// Number of maximal constant intervals.
pub fn runs(u: &Word) -> Result<usize> {
    if u.is_empty() {
        return domain("runs of the empty word");
    }
    Ok(1 + u.symbols.windows(2).filter(|w| w[0] != w[1]).count())
}

/// All distinct words obtained from `u` by deleting exactly `t` symbols.
pub fn deletion_sphere(u: &Word, t: usize) -> Result<BTreeSet<Word>> {
    if t > u.len() {
        return domain(format!("cannot delete {t} symbols from a word of length {}", u.len()));
    }
    let mut layer: BTreeSet<Vec<u32>> = BTreeSet::from([u.symbols.clone()]);
    for _ in 0..t {
        let mut next = BTreeSet::new();
        for w in &layer {
            for i in 0..w.len() {
                // deleting inside a run gives the same word; take one per run
                if i > 0 && w[i] == w[i - 1] {
                    continue;
                }
                let mut v = w.clone();
                v.remove(i);
                next.insert(v);
            }
        }
        layer = next;
    }
    Ok(layer.into_iter().map(|s| Word::from_raw(s, u.q)).collect())
}

/// All distinct words obtained from `u` by inserting exactly `t` symbols.
pub fn insertion_sphere(u: &Word, t: usize) -> BTreeSet<Word> {
    let mut layer: BTreeSet<Vec<u32>> = BTreeSet::from([u.symbols.clone()]);
    for _ in 0..t {
        let mut next = BTreeSet::new();
        for w in &layer {
            for i in 0..=w.len() {
                for s in 0..u.q {
                    let mut v = w.clone();
                    v.insert(i, s);
                    next.insert(v);
                }
            }
        }
        layer = next;
    }
    layer.into_iter().map(|s| Word::from_raw(s, u.q)).collect()
}

/// `|S_I(u, t)| = sum_{i=0}^{t} C(n+t, i) (q-1)^i`, independent of `u`.
pub fn insertion_sphere_size(n: u64, t: u64, q: u64) -> Integer {
    (0..=t).map(|i| choose(n + t, i as i64) * pow(q - 1, i as u32)).sum()
}

pub(crate) fn check_enum_cap(n: usize, q: u32, cap: u128, what: &str) -> Result<()> {
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::Resource { what: what.to_string(), needed: size, cap });
    }
    Ok(())
}

/// Lexicographic iterator over `[q]^n`.
pub struct AllWords {
    next: Option<Vec<u32>>,
    q: u32,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.q {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Word::from_raw(cur, self.q))
    }
}

/// Position of `symbols` in the lexicographic order of `[q]^n`.
pub fn word_index(symbols: &[u32], q: u32) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * q as usize + s as usize)
}

/// Inverse of [`word_index`].
pub fn word_from_index(mut idx: usize, n: usize, q: u32) -> Word {
    let mut symbols = vec![0; n];
    for slot in symbols.iter_mut().rev() {
        *slot = (idx % q as usize) as u32;
        idx /= q as usize;
    }
    Word::from_raw(symbols, q)
}

pub fn all_words(n: usize, q: u32) -> AllWords {
    AllWords { next: Some(vec![0; n]), q }
}

/// `[q]^n` in lexicographic order, refusing when `q^n > cap`.
pub fn all_words_capped(n: usize, q: u32, cap: u128) -> Result<Vec<Word>> {
    check_enum_cap(n, q, cap, "enumeration of [q]^n")?;
    Ok(all_words(n, q).collect())
}

/// Same-length words within edit distance `radius` of `u`, by scanning `[q]^n`.
pub fn editing_ball(u: &Word, radius: usize, cap: u128) -> Result<BTreeSet<Word>> {
    if radius % 2 == 1 {
        return domain(format!("editing ball radius must be even, got {radius}"));
    }
    if radius > 2 * u.len() {
        return domain(format!("radius {radius} exceeds 2n = {}", 2 * u.len()));
    }
    check_enum_cap(u.len(), u.q, cap, "editing ball scan")?;
    let n = u.len();
    Ok(all_words(n, u.q).filter(|v| 2 * n - 2 * lcs_slices(&u.symbols, &v.symbols) <= radius).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditOp {
    Delete,
    Insert(u32),
}

/// One operation at an original position of the word (1-based for deletes;
/// an insert at `p` goes after the `p`-th symbol, `p = 0` meaning the front).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Op {
    pub position: usize,
    pub op: EditOp,
}

impl Op {
    pub fn delete(position: usize) -> Self {
        Self { position, op: EditOp::Delete }
    }

    pub fn insert(position: usize, symbol: u32) -> Self {
        Self { position, op: EditOp::Insert(symbol) }
    }
}

/// Operations listed in application order: positions non-increasing, and a
/// delete strictly above the position of the entry after it. Since later
/// entries never sit above earlier ones, every position is also the position
/// in the original word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpSequence {
    entries: Vec<Op>,
}

impl OpSequence {
    pub fn new(entries: Vec<Op>) -> Result<Self> {
        for (k, e) in entries.iter().enumerate() {
            if e.op == EditOp::Delete && e.position == 0 {
                return domain("delete at position 0");
            }
            if let Some(next) = entries.get(k + 1) {
                if next.position > e.position {
                    return domain(format!("positions must be non-increasing: {} then {}", e.position, next.position));
                }
                if e.op == EditOp::Delete && next.position == e.position {
                    return domain(format!("delete at {} must be strictly above the next position", e.position));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Op] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.position).collect()
    }

    /// Net change in length.
    pub fn length_delta(&self) -> isize {
        self.entries.iter().map(|e| if e.op == EditOp::Delete { -1 } else { 1 }).sum()
    }
}

/// Applies the operations from the largest position down.
pub fn apply_ops(u: &Word, ops: &OpSequence) -> Result<Word> {
    let mut v = u.symbols.clone();
    for e in &ops.entries {
        if e.position > u.len() {
            return domain(format!("position {} beyond word length {}", e.position, u.len()));
        }
        match e.op {
            EditOp::Delete => {
                if e.position == 0 {
                    return domain("delete at position 0");
                }
                v.remove(e.position - 1);
            }
            EditOp::Insert(s) => {
                if s >= u.q {
                    return domain(format!("inserted symbol {s} outside alphabet {}", u.q));
                }
                v.insert(e.position, s);
            }
        }
    }
    Ok(Word::from_raw(v, u.q))
}

/// Counts the lambda-isolated entries of a position list over `[0, n]`:
/// `lambda < i < n - lambda` and no *other* entry within `2 lambda`.
/// Repeated positions count as other entries.
pub fn count_lambda_isolated(positions: &[usize], n: usize, lambda: usize) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|&(k, &i)| {
            i > lambda
                && i + lambda < n
                && positions.iter().enumerate().all(|(m, &j)| m == k || i.abs_diff(j) > 2 * lambda)
        })
        .count()
}

/// True iff all length-`lambda` windows of `u` (overlapping ones included) differ.
pub fn is_lambda_nonrepeating(u: &Word, lambda: usize) -> Result<bool> {
    if lambda == 0 || lambda > u.len() {
        return domain(format!("lambda = {lambda} outside [1, {}]", u.len()));
    }
    let mut seen = HashSet::new();
    Ok(u.symbols.windows(lambda).all(|w| seen.insert(w)))
}

/// For each support size `j`, the number of distinct length-`m`
/// subsequences of `c` using exactly `j` distinct symbols.
pub fn subsequence_support_profile(c: &Word, m: usize) -> Result<BTreeMap<usize, u64>> {
    if m == 0 || m > c.len() {
        return domain(format!("subsequence length {m} outside [1, {}]", c.len()));
    }
    let mut profile = BTreeMap::new();
    for w in deletion_sphere(c, c.len() - m)? {
        *profile.entry(w.support_size()).or_insert(0) += 1;
    }
    Ok(profile)
}
