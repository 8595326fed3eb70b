//! Explicit codes, exact minimum-distance verification, and the plain-text
//! code file format:
//!
//! ```text
//! q n [d]
//! s_1 s_2 ... s_n
//! ...
//! ```
//!
//! One codeword per line, symbols in `[0, q-1]`, every line newline-terminated.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::words::{edit_distance, lcs_bitparallel, lcs_slices, match_masks, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    pub n: usize,
    pub q: u32,
    /// Codewords in the order they were produced or read; duplicates are kept
    /// so that verification can report them.
    pub words: Vec<Word>,
    /// Set once [`verify_code_distance`] has confirmed this minimum distance.
    pub verified_min_edit_distance: Option<usize>,
    pub provenance: String,
}

impl Code {
    pub fn new(n: usize, q: u32, words: Vec<Word>, provenance: impl Into<String>) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| w.len() != n || w.q() != q) {
            return domain(format!("word {w} does not have length {n} over alphabet {q}"));
        }
        Ok(Self { n, q, words, verified_min_edit_distance: None, provenance: provenance.into() })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Verifies distance `d` and records it, or fails with the witness pair.
    pub fn certify(mut self, d: usize) -> Result<Self> {
        let report = verify_code_distance(&self, d)?;
        if !report.ok {
            let (i, j) = report.witness.expect("failed check has a witness");
            return Err(Error::Internal(format!(
                "codewords {} and {} are at distance {} < {d}",
                self.words[i], self.words[j], report.min_distance
            )));
        }
        self.verified_min_edit_distance = Some(d);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub ok: bool,
    /// Exact minimum pairwise edit distance; `2n + 1` when there is no pair.
    pub min_distance: usize,
    /// Indices of a closest pair (the lexicographically first), when `!ok`.
    pub witness: Option<(usize, usize)>,
}

/// Edit distance of equal-length symbol strings, bit-parallel when possible.
pub(crate) struct PairDistance {
    bytes: Vec<Vec<u8>>,
    masks: Option<Vec<Vec<u64>>>,
}

impl PairDistance {
    pub(crate) fn new(words: &[Word], q: u32) -> Self {
        let n = words.first().map_or(0, Word::len);
        if n <= 64 && q <= 256 {
            let bytes: Vec<Vec<u8>> = words.iter().map(|w| w.symbols().iter().map(|&s| s as u8).collect()).collect();
            let masks = bytes.iter().map(|b| match_masks(b, q as usize)).collect();
            Self { bytes, masks: Some(masks) }
        } else {
            Self { bytes: Vec::new(), masks: None }
        }
    }

    pub(crate) fn lcs(&self, words: &[Word], i: usize, j: usize) -> usize {
        match &self.masks {
            Some(m) => lcs_bitparallel(&m[i], self.bytes[i].len(), &self.bytes[j]),
            None => lcs_slices(words[i].symbols(), words[j].symbols()),
        }
    }
}

/// Exact pairwise minimum edit distance, all pairs in parallel.
pub fn verify_code_distance(c: &Code, d: usize) -> Result<DistanceReport> {
    if let Some(w) = c.words.iter().find(|w| w.len() != c.n || w.q() != c.q) {
        return domain(format!("word {w} does not have length {} over alphabet {}", c.n, c.q));
    }
    let pd = PairDistance::new(&c.words, c.q);
    let m = c.words.len();
    let best = (0..m)
        .into_par_iter()
        .filter_map(|i| (i + 1..m).map(|j| (2 * (c.n - pd.lcs(&c.words, i, j)), i, j)).min())
        .min();
    Ok(match best {
        None => DistanceReport { ok: true, min_distance: 2 * c.n + 1, witness: None },
        Some((dist, i, j)) => {
            DistanceReport { ok: dist >= d, min_distance: dist, witness: (dist < d).then_some((i, j)) }
        }
    })
}

/// Plain quadratic check with the dynamic-programming LCS; used as an oracle.
pub fn min_distance_naive(words: &[Word]) -> Option<usize> {
    let mut best = None;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let d = edit_distance(&words[i], &words[j]).expect("same alphabet");
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best
}

/// Serializes in the code file format; `d` goes into the header when given.
pub fn write_code_file(c: &Code, d: Option<usize>) -> String {
    let mut out = String::new();
    match d {
        Some(d) => writeln!(out, "{} {} {d}", c.q, c.n),
        None => writeln!(out, "{} {}", c.q, c.n),
    }
    .expect("writing to a String");
    for w in &c.words {
        writeln!(out, "{w}").expect("writing to a String");
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("{what}: expected a non-negative integer, got {tok:?}") })
}

/// Parses the code file format, returning the code and the optional header `d`.
/// Line numbers in errors are 1-based.
pub fn read_code_file(text: &str) -> Result<(Code, Option<usize>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 && head.len() != 3 {
        return Err(Error::Parse { line: 1, msg: "header must be \"q n\" or \"q n d\"".into() });
    }
    let q: u32 = parse_num(head[0], 1, "q")?;
    let n: usize = parse_num(head[1], 1, "n")?;
    let d: Option<usize> = head.get(2).map(|t| parse_num(t, 1, "d")).transpose()?;
    if q < 2 {
        return Err(Error::Parse { line: 1, msg: format!("q must be at least 2, got {q}") });
    }
    let mut words = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse { line, msg: format!("expected {n} symbols, found {}", toks.len()) });
        }
        let mut symbols = Vec::with_capacity(n);
        for t in toks {
            let s: u32 = parse_num(t, line, "symbol")?;
            if s >= q {
                return Err(Error::Parse { line, msg: format!("symbol {s} outside [0, {}]", q - 1) });
            }
            symbols.push(s);
        }
        words.push(Word::new(symbols, q).expect("symbols checked"));
    }
    Ok((Code::new(n, q, words, "file")?, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::all_words;

    fn code(q: u32, rows: &[&[u32]]) -> Code {
        let words: Vec<Word> = rows.iter().map(|r| Word::new(r.to_vec(), q).unwrap()).collect();
        Code::new(rows[0].len(), q, words, "test").unwrap()
    }

    #[test]
    fn repetition_code_has_distance_2n() {
        for q in 2..=5u32 {
            let rows: Vec<Vec<u32>> = (0..q).map(|a| vec![a; 4]).collect();
            let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
            let r = verify_code_distance(&code(q, &refs), 8).unwrap();
            assert_eq!((r.ok, r.min_distance), (true, 8));
        }
    }

    #[test]
    fn vt_style_code() {
        let c = code(2, &[&[0, 0, 0, 0], &[0, 1, 1, 0], &[1, 0, 0, 1], &[1, 1, 1, 1]]);
        let r = verify_code_distance(&c, 4).unwrap();
        assert_eq!((r.ok, r.min_distance), (true, 4));
        let r = verify_code_distance(&c, 6).unwrap();
        assert!(!r.ok);
        assert_eq!(r.witness, Some((0, 1)));
    }

    #[test]
    fn single_word_is_vacuous() {
        let r = verify_code_distance(&code(3, &[&[0, 1, 2]]), 6).unwrap();
        assert_eq!((r.ok, r.min_distance, r.witness), (true, 7, None));
    }

    #[test]
    fn duplicates_fail() {
        let r = verify_code_distance(&code(2, &[&[0, 1], &[1, 1], &[0, 1]]), 2).unwrap();
        assert_eq!((r.ok, r.min_distance, r.witness), (false, 0, Some((0, 2))));
    }

    #[test]
    fn mixed_lengths_are_a_domain_error() {
        let mut c = code(2, &[&[0, 1]]);
        c.words.push(Word::new(vec![0, 1, 1], 2).unwrap());
        assert!(matches!(verify_code_distance(&c, 2), Err(Error::Domain(_))));
        assert!(Code::new(2, 2, c.words.clone(), "").is_err());
    }

    #[test]
    fn bitparallel_matches_naive() {
        let words: Vec<Word> = all_words(5, 3).step_by(7).collect();
        let c = Code::new(5, 3, words.clone(), "").unwrap();
        assert_eq!(Some(verify_code_distance(&c, 0).unwrap().min_distance), min_distance_naive(&words));
        let long: Vec<Word> =
            (0..4u32).map(|k| Word::new((0..70).map(|i| (i * k / 3) % 2).collect(), 2).unwrap()).collect();
        let c = Code::new(70, 2, long.clone(), "").unwrap();
        assert_eq!(Some(verify_code_distance(&c, 0).unwrap().min_distance), min_distance_naive(&long));
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let text = "2 4 4\n0 0 0 0\n0 1 1 0\n1 0 0 1\n1 1 1 1\n";
        let (c, d) = read_code_file(text).unwrap();
        assert_eq!((c.len(), d), (4, Some(4)));
        assert_eq!(write_code_file(&c, d), text);
        let text = "3 2\n";
        let (c, d) = read_code_file(text).unwrap();
        assert!(c.is_empty() && d.is_none());
        assert_eq!(write_code_file(&c, d), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            read_code_file("3 2\n0 1\n2 3\n").unwrap_err(),
            Error::Parse { line: 3, msg: "symbol 3 outside [0, 2]".into() }
        );
        assert!(matches!(read_code_file("3 2\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_code_file("3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_code_file(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_code_file("2 2\n0 x\n"), Err(Error::Parse { line: 2, .. })));
    }

    proptest::proptest! {
        #[test]
        fn code_files_round_trip(
            n in 1usize..8,
            q in 2u32..6,
            seeds in proptest::collection::vec(proptest::num::u64::ANY, 1..10),
            with_d in proptest::bool::ANY,
        ) {
            let words = seeds
                .iter()
                .map(|s| Word::new((0..n).map(|i| ((s >> (3 * i)) % q as u64) as u32).collect(), q).unwrap())
                .collect();
            let c = Code::new(n, q, words, "test").unwrap();
            let d = with_d.then_some(2);
            let (back, back_d) = read_code_file(&write_code_file(&c, d)).unwrap();
            proptest::prop_assert_eq!(back_d, d);
            proptest::prop_assert_eq!(&back.words, &c.words);
            let fast = verify_code_distance(&c, 0).unwrap().min_distance;
            proptest::prop_assert_eq!(min_distance_naive(&c.words).unwrap_or(2 * n + 1), fast);
        }
    }
}
