//! Exact `D_q(n, d)` for small parameters: a maximum clique in the
//! compatibility graph on `[q]^n` (words adjacent when at edit distance at
//! least `d`), which is a maximum independent set of the conflict graph.
//!
//! The search is bitset branch-and-bound with greedy-coloring bounds. The
//! vertices are renumbered by non-increasing degree, colored greedily in that
//! order at every node, and branched on from the highest color down. A
//! clique through a vertex of color `k` using only earlier vertices has at
//! most `k` elements, which is both the pruning rule and the proof of
//! optimality when the search completes. Coloring recolors a vertex into a
//! lower class when a single swap allows it, and the starting clique comes
//! from a seeded local search, so results are reproducible.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bound::Params;
use crate::code::{Code, PairDistance};
use crate::error::{Error, Result};
use crate::words::{all_words, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveLimits {
    /// Largest `q^n` the solver accepts.
    pub vertex_cap: u128,
    pub time_budget: Option<Duration>,
    /// On timeout, return the best witness instead of an error.
    pub allow_incomplete: bool,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self { vertex_cap: 4096, time_budget: None, allow_incomplete: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactValue {
    Exact(usize),
    /// The search stopped early: `D` lies in `[witness size, proven_upper]`.
    LowerWitnessOnly {
        proven_upper: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub params: Params,
    pub value: ExactValue,
    /// A code of maximum size when exact, the best found otherwise.
    pub witness: Code,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl ExactResult {
    pub fn exact(&self) -> Option<usize> {
        match self.value {
            ExactValue::Exact(v) => Some(v),
            ExactValue::LowerWitnessOnly { .. } => None,
        }
    }

    /// Largest value of `D` not ruled out by the search.
    pub fn upper(&self) -> usize {
        match self.value {
            ExactValue::Exact(v) => v,
            ExactValue::LowerWitnessOnly { proven_upper } => proven_upper,
        }
    }
}

fn check_cap(p: &Params, cap: u128) -> Result<usize> {
    let size = (p.q as u128).checked_pow(p.n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::Resource { what: format!("exact solve over [{}]^{}", p.q, p.n), needed: size, cap });
    }
    Ok(size as usize)
}

/// Pairwise edit distances over `[q]^n` in lexicographic order.
struct DistanceTable {
    words: Vec<Word>,
    dist: Vec<Vec<u8>>,
}

impl DistanceTable {
    fn new(p: &Params) -> Self {
        let words: Vec<Word> = all_words(p.n as usize, p.q as u32).collect();
        let pd = PairDistance::new(&words, p.q as u32);
        let n = p.n as usize;
        let dist = (0..words.len())
            .into_par_iter()
            .map(|i| (0..words.len()).map(|j| (2 * (n - pd.lcs(&words, i, j))) as u8).collect())
            .collect();
        Self { words, dist }
    }
}

type Bits = Vec<u64>;

const LOCAL_SEARCH_EDGE_CAP: usize = 1 << 22;
const LOCAL_SEARCH_ROUNDS: usize = 20_000;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn bits_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn first_bit(b: &Bits) -> Option<usize> {
    b.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
}

/// The only element of `a & b`, if there is exactly one.
fn single_common(a: &Bits, b: &Bits) -> Option<usize> {
    let mut found = None;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let w = x & y;
        if w == 0 {
            continue;
        }
        if found.is_some() || w.count_ones() > 1 {
            return None;
        }
        found = Some(k * 64 + w.trailing_zeros() as usize);
    }
    found
}

struct Search<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    start: Instant,
    budget: Option<Duration>,
    aborted: bool,
    /// Bound on everything not yet refuted, valid once `aborted` is set.
    root_bound_at_abort: usize,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(b) = self.budget {
                if self.start.elapsed() > b {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    /// Greedy coloring of `p` in index order. Returns the vertices whose
    /// color is at least `kmin`, with their colors, in coloring order.
    ///
    /// A vertex about to open a class at or above `kmin` is first offered to
    /// a lower class where it has a single neighbor `w` that can move up to
    /// another lower class with no neighbor of `w`; this keeps the coloring
    /// proper and often removes the vertex from the branching list.
    fn color(&self, p: &Bits, kmin: usize) -> Vec<(usize, usize)> {
        let mut uncolored = p.clone();
        let mut out = Vec::new();
        let mut classes: Vec<Bits> = Vec::new();
        let mut k = 1;
        while !bits_empty(&uncolored) {
            let mut q = uncolored.clone();
            let mut class = vec![0u64; p.len()];
            while let Some(v) = first_bit(&q) {
                bit_clear(&mut uncolored, v);
                bit_clear(&mut q, v);
                if k >= kmin && k >= 3 && self.recolor(v, &mut classes[..kmin.min(k) - 1]) {
                    continue;
                }
                for (a, b) in q.iter_mut().zip(&self.adj[v]) {
                    *a &= !b;
                }
                bit_set(&mut class, v);
                if k >= kmin {
                    out.push((v, k));
                }
            }
            if k < kmin {
                classes.push(class);
            }
            k += 1;
        }
        out
    }

    fn recolor(&self, v: usize, classes: &mut [Bits]) -> bool {
        let nv = &self.adj[v];
        for k1 in 0..classes.len() {
            let Some(w) = single_common(&classes[k1], nv) else { continue };
            let nw = &self.adj[w];
            for k2 in k1 + 1..classes.len() {
                if classes[k2].iter().zip(nw).all(|(a, b)| a & b == 0) {
                    bit_clear(&mut classes[k1], w);
                    bit_set(&mut classes[k1], v);
                    bit_set(&mut classes[k2], w);
                    return true;
                }
            }
        }
        false
    }

    fn expand(&mut self, mut p: Bits, depth: usize) {
        let kmin = (self.best.len() + 1).saturating_sub(self.current.len()).max(1);
        let order = self.color(&p, kmin);
        for &(v, k) in order.iter().rev() {
            if self.current.len() + k <= self.best.len() {
                return;
            }
            if self.out_of_time() {
                if depth == 0 {
                    self.root_bound_at_abort = k;
                }
                return;
            }
            self.current.push(v);
            let next: Bits = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            if bits_empty(&next) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next, depth + 1);
            }
            self.current.pop();
            if self.aborted {
                if depth == 0 {
                    self.root_bound_at_abort = k;
                }
                return;
            }
            bit_clear(&mut p, v);
        }
    }
}

/// Greedy cliques in a few vertex orders; the largest is the starting bound.
fn greedy_start(adj: &[Bits], orders: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for order in orders {
        let mut chosen: Vec<usize> = Vec::new();
        let mut allowed = vec![u64::MAX; adj[0].len()];
        for &v in order {
            if allowed[v / 64] >> (v % 64) & 1 == 1 {
                chosen.push(v);
                for (a, b) in allowed.iter_mut().zip(&adj[v]) {
                    *a &= b;
                }
            }
        }
        if chosen.len() > best.len() {
            best = chosen;
        }
    }
    best
}

/// Iterated local search for a large independent set of the conflict graph,
/// started from the clique `init` of the compatibility graph `adj`.
///
/// Each round forces a random outside vertex in, drops its conflicting
/// members, then repairs with (1,2)-swaps (one member out, two compatible
/// words in) and free insertions. Rounds that lose more than one element are
/// undone. The RNG is seeded, so the result is reproducible.
fn local_search(adj: &[Bits], conflict: &[Vec<u32>], init: &[usize], rounds: usize) -> Vec<usize> {
    let n = conflict.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d5e_1c0d);
    let mut in_sol = vec![false; n];
    let mut tight = vec![0u32; n];
    let mut size = 0usize;
    let mut log: Vec<(usize, bool)> = Vec::new();

    let insert = |v: usize, in_sol: &mut [bool], tight: &mut [u32], size: &mut usize, log: &mut Vec<(usize, bool)>| {
        in_sol[v] = true;
        *size += 1;
        log.push((v, true));
        for &u in &conflict[v] {
            tight[u as usize] += 1;
        }
    };
    let remove = |v: usize, in_sol: &mut [bool], tight: &mut [u32], size: &mut usize, log: &mut Vec<(usize, bool)>| {
        in_sol[v] = false;
        *size -= 1;
        log.push((v, false));
        for &u in &conflict[v] {
            tight[u as usize] -= 1;
        }
    };
    for &v in init {
        insert(v, &mut in_sol, &mut tight, &mut size, &mut log);
    }
    let mut best: Vec<usize> = init.to_vec();
    let compatible = |u: usize, w: usize| adj[u][w / 64] >> (w % 64) & 1 == 1;

    for _ in 0..rounds {
        if size == n {
            break;
        }
        log.clear();
        let before = size;
        let v = loop {
            let v = rng.gen_range(0..n);
            if !in_sol[v] {
                break v;
            }
        };
        let drop: Vec<usize> = conflict[v].iter().map(|&u| u as usize).filter(|&u| in_sol[u]).collect();
        for u in drop {
            remove(u, &mut in_sol, &mut tight, &mut size, &mut log);
        }
        insert(v, &mut in_sol, &mut tight, &mut size, &mut log);

        // free insertions, then (1,2)-swaps until neither applies
        let mut improved = true;
        while improved {
            improved = false;
            let start = rng.gen_range(0..n);
            for i in 0..n {
                let u = (start + i) % n;
                if !in_sol[u] && tight[u] == 0 {
                    insert(u, &mut in_sol, &mut tight, &mut size, &mut log);
                    improved = true;
                }
            }
            let members: Vec<usize> = (0..n).filter(|&x| in_sol[x]).collect();
            'swap: for x in members {
                if !in_sol[x] {
                    continue;
                }
                let cands: Vec<usize> =
                    conflict[x].iter().map(|&u| u as usize).filter(|&u| !in_sol[u] && tight[u] == 1).collect();
                for (i, &a) in cands.iter().enumerate() {
                    for &b in &cands[i + 1..] {
                        if compatible(a, b) {
                            remove(x, &mut in_sol, &mut tight, &mut size, &mut log);
                            insert(a, &mut in_sol, &mut tight, &mut size, &mut log);
                            insert(b, &mut in_sol, &mut tight, &mut size, &mut log);
                            improved = true;
                            continue 'swap;
                        }
                    }
                }
            }
        }

        if size > best.len() {
            best = (0..n).filter(|&x| in_sol[x]).collect();
        } else if size + 1 < before {
            for &(u, added) in log.iter().rev() {
                in_sol[u] = !added;
                if added {
                    size -= 1;
                    for &w in &conflict[u] {
                        tight[w as usize] -= 1;
                    }
                } else {
                    size += 1;
                    for &w in &conflict[u] {
                        tight[w as usize] += 1;
                    }
                }
            }
        }
    }
    best
}

/// `D_q(n, d)` by branch-and-bound, with a verified witness code.
pub fn exact_d(p: &Params, limits: &SolveLimits) -> Result<ExactResult> {
    let start = Instant::now();
    let size = check_cap(p, limits.vertex_cap)?;
    let table = DistanceTable::new(p);
    let d = p.d as u8;

    // renumber by non-increasing compatibility degree, ties by word order
    let degree: Vec<usize> = table.dist.iter().map(|row| row.iter().filter(|&&x| x >= d).count()).collect();
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
    let mut rank = vec![0; size];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let blocks = size.div_ceil(64);
    let adj: Vec<Bits> = order
        .iter()
        .map(|&v| {
            let mut b = vec![0u64; blocks];
            for (u, &x) in table.dist[v].iter().enumerate() {
                if x >= d {
                    bit_set(&mut b, rank[u]);
                }
            }
            b
        })
        .collect();

    let lex: Vec<usize> = (0..size).map(|v| rank[v]).collect();
    let by_low_conflict: Vec<usize> = (0..size).rev().collect();
    let mut initial = greedy_start(&adj, &[lex, by_low_conflict]);

    // polish the greedy start when the conflict graph is sparse enough
    let conflict_edges: usize = degree.iter().map(|&g| size - g).sum();
    if conflict_edges <= LOCAL_SEARCH_EDGE_CAP && size > 1 {
        let conflict: Vec<Vec<u32>> = (0..size)
            .map(|r| (0..size).filter(|&u| u != r && adj[r][u / 64] >> (u % 64) & 1 == 0).map(|u| u as u32).collect())
            .collect();
        initial = local_search(&adj, &conflict, &initial, LOCAL_SEARCH_ROUNDS);
    }

    let mut all = vec![0u64; blocks];
    for v in 0..size {
        bit_set(&mut all, v);
    }
    let mut search = Search {
        adj: &adj,
        best: initial,
        current: Vec::new(),
        nodes: 0,
        start,
        budget: limits.time_budget,
        aborted: false,
        root_bound_at_abort: 0,
    };
    search.expand(all, 0);

    let best_size = search.best.len();
    let value = if search.aborted {
        if !limits.allow_incomplete {
            return Err(Error::Timeout(format!(
                "exact solve of {p} exceeded {:?}; best found {best_size}",
                limits.time_budget.unwrap_or_default()
            )));
        }
        ExactValue::LowerWitnessOnly { proven_upper: search.root_bound_at_abort.max(best_size) }
    } else {
        ExactValue::Exact(best_size)
    };
    let mut words: Vec<Word> = search.best.iter().map(|&r| table.words[order[r]].clone()).collect();
    words.sort();
    let provenance = match value {
        ExactValue::Exact(_) => "exact branch-and-bound".to_string(),
        ExactValue::LowerWitnessOnly { .. } => "branch-and-bound, incomplete".to_string(),
    };
    let witness = Code::new(p.n as usize, p.q as u32, words, provenance)?.certify(p.d as usize)?;
    Ok(ExactResult { params: *p, value, witness, nodes: search.nodes, elapsed: start.elapsed() })
}

/// Degree histogram of the conflict graph (words at distance below `d`, no loops).
pub fn conflict_degree_histogram(p: &Params, vertex_cap: u128) -> Result<BTreeMap<usize, usize>> {
    check_cap(p, vertex_cap)?;
    let table = DistanceTable::new(p);
    let d = p.d as u8;
    let mut hist = BTreeMap::new();
    for (i, row) in table.dist.iter().enumerate() {
        let deg = row.iter().enumerate().filter(|&(j, &x)| j != i && x < d).count();
        *hist.entry(deg).or_insert(0) += 1;
    }
    Ok(hist)
}
