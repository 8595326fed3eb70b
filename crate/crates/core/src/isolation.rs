//! Randomized check of the isolated-position property: for lambda-nonrepeating
//! `u` and `v = apply_ops(u, ops)` of the same length, also lambda-nonrepeating,
//! at least `d - 1` lambda-isolated positions force `d_E(u, v) >= d` for every
//! even `d`.
//!
//! Odd `d` is excluded: one deletion and one insertion far apart give two
//! isolated positions at distance 2, and equal-length words are always at
//! even distance.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::words::{
    apply_ops, count_lambda_isolated, edit_distance, is_lambda_nonrepeating, EditOp, Op, OpSequence, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationConfig {
    pub trials: usize,
    pub seed: u64,
    pub lambda: usize,
    pub max_n: usize,
    pub max_q: u32,
    /// Each trial uses between 1 and this many deletion/insertion pairs.
    pub max_pairs: usize,
}

impl Default for IsolationConfig {
    fn default() -> Self {
        Self { trials: 10_000, seed: 1, lambda: 3, max_n: 12, max_q: 4, max_pairs: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub u: String,
    pub v: String,
    pub positions: Vec<usize>,
    pub isolated: usize,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    pub config: IsolationConfig,
    /// Trials where both words were nonrepeating.
    pub trials: usize,
    /// Samples thrown away because `u` or `v` repeated a window.
    pub rejected: usize,
    pub with_isolated: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Largest `n` for which a `q`-ary lambda-nonrepeating word can exist.
fn longest_nonrepeating(q: u32, lambda: usize) -> usize {
    (q as usize).checked_pow(lambda as u32).map_or(usize::MAX, |w| w + lambda - 1)
}

fn sample(rng: &mut ChaCha8Rng, cfg: &IsolationConfig) -> Option<(Word, OpSequence)> {
    let q = rng.gen_range(2..=cfg.max_q);
    let max_n = cfg.max_n.min(longest_nonrepeating(q, cfg.lambda));
    let n = rng.gen_range(cfg.lambda..=max_n);
    let u = Word::new((0..n).map(|_| rng.gen_range(0..q)).collect(), q).ok()?;
    if !is_lambda_nonrepeating(&u, cfg.lambda).ok()? {
        return None;
    }
    let pairs = rng.gen_range(1..=cfg.max_pairs);
    let dels: BTreeSet<usize> = (0..pairs).map(|_| rng.gen_range(1..=n)).collect();
    let mut ops: Vec<Op> = dels.iter().map(|&p| Op::delete(p)).collect();
    ops.extend((0..dels.len()).map(|_| Op::insert(rng.gen_range(0..=n), rng.gen_range(0..q))));
    // descending positions; at a shared position the insert goes first
    ops.sort_by(|a, b| b.position.cmp(&a.position).then((a.op == EditOp::Delete).cmp(&(b.op == EditOp::Delete))));
    Some((u, OpSequence::new(ops).ok()?))
}

/// Runs trials until `cfg.trials` pairs of nonrepeating words were tested.
pub fn check_isolation(cfg: &IsolationConfig) -> Result<IsolationReport> {
    if cfg.lambda == 0 || cfg.max_q < 2 || cfg.max_pairs == 0 || cfg.max_n < cfg.lambda {
        return domain("need lambda >= 1, max_q >= 2, max_pairs >= 1 and max_n >= lambda");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report =
        IsolationReport { config: cfg.clone(), trials: 0, rejected: 0, with_isolated: 0, counterexamples: Vec::new() };
    while report.trials < cfg.trials {
        let Some((u, ops)) = sample(&mut rng, cfg) else {
            report.rejected += 1;
            continue;
        };
        let v = apply_ops(&u, &ops)?;
        if !is_lambda_nonrepeating(&v, cfg.lambda)? {
            report.rejected += 1;
            continue;
        }
        report.trials += 1;
        let isolated = count_lambda_isolated(&ops.positions(), u.len(), cfg.lambda);
        if isolated > 0 {
            report.with_isolated += 1;
        }
        let distance = edit_distance(&u, &v)?;
        let d = isolated.div_ceil(2) * 2;
        if d >= 2 && distance < d {
            report.counterexamples.push(Counterexample {
                u: u.to_string(),
                v: v.to_string(),
                positions: ops.positions(),
                isolated,
                distance,
            });
        }
    }
    Ok(report)
}
