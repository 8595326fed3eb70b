//! Long-format CSV: one row per (point, bound). Exact values keep their
//! decimal numerator and denominator, estimates their shortest round-trip
//! float text, so CSV and JSON carry the same information.

use anyhow::{bail, Context, Result};
use insdel::{Approx, BoundKind, BoundNumber, BoundValue, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::record::{PointParams, ResultRecord};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    n: u64,
    q: u64,
    d: u64,
    exact: Option<u64>,
    timestamp: String,
    tool_version: String,
    name: String,
    kind: BoundKind,
    applicable: bool,
    num: Option<String>,
    den: Option<String>,
    approx: Option<f64>,
    approx_log10: Option<f64>,
    integer_value: Option<String>,
    note: String,
}

pub fn records_to_csv(records: &[ResultRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        if r.bounds.is_empty() {
            bail!("record for {:?} has no bounds to write", r.params);
        }
        for b in &r.bounds {
            let (mut num, mut den, mut approx, mut approx_log10) = (None, None, None, None);
            match &b.value {
                Some(BoundNumber::Exact(x)) => {
                    num = Some(x.numer().to_string());
                    den = Some(x.denom().to_string());
                }
                Some(BoundNumber::Approx(a)) => {
                    approx = Some(a.value);
                    approx_log10 = Some(a.log10_abs);
                }
                None => {}
            }
            w.serialize(Row {
                n: r.params.n,
                q: r.params.q,
                d: r.params.d,
                exact: r.exact,
                timestamp: r.timestamp.clone(),
                tool_version: r.tool_version.clone(),
                name: b.name.clone(),
                kind: b.kind,
                applicable: b.applicable,
                num,
                den,
                approx,
                approx_log10,
                integer_value: b.integer_value.as_ref().map(Integer::to_string),
                note: b.condition_note.clone(),
            })?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn parse_int(s: &str, line: u64) -> Result<Integer> {
    s.parse().with_context(|| format!("line {line}: bad integer {s:?}"))
}

/// Groups consecutive rows with the same `(n, q, d)` back into records.
pub fn records_from_csv(text: &str) -> Result<Vec<ResultRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out: Vec<ResultRecord> = Vec::new();
    for (i, row) in rd.deserialize::<Row>().enumerate() {
        let line = i as u64 + 2;
        let row = row.with_context(|| format!("line {line}"))?;
        let value = match (row.num, row.den, row.approx, row.approx_log10) {
            (Some(n), Some(d), None, None) => {
                let (n, d) = (parse_int(&n, line)?, parse_int(&d, line)?);
                if d == Integer::from(0) {
                    bail!("line {line}: zero denominator");
                }
                Some(BoundNumber::Exact(Rational::new(n, d)))
            }
            (None, None, Some(value), Some(log10_abs)) => Some(BoundNumber::Approx(Approx { value, log10_abs })),
            (None, None, None, None) => None,
            _ => bail!("line {line}: value columns are inconsistent"),
        };
        let bound = BoundValue {
            name: row.name,
            kind: row.kind,
            value,
            integer_value: row.integer_value.map(|s| parse_int(&s, line)).transpose()?,
            applicable: row.applicable,
            condition_note: row.note,
        };
        let params = PointParams { n: row.n, q: row.q, d: row.d };
        match out.last_mut() {
            Some(r) if r.params == params => r.bounds.push(bound),
            _ => out.push(ResultRecord {
                params,
                bounds: vec![bound],
                exact: row.exact,
                witness: None,
                timestamp: row.timestamp,
                tool_version: row.tool_version,
            }),
        }
    }
    Ok(out)
}
