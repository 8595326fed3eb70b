use insdel::upper_bounds::{kk_upper, levenshtein_envelope, thm25_eq6_main, thm25_upper};
use insdel::{BoundKind, BoundValue, Params, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

fn kind_label(k: BoundKind) -> &'static str {
    match k {
        BoundKind::CertifiedUpper => "upper",
        BoundKind::CertifiedLower => "lower",
        BoundKind::Estimate => "estimate",
        BoundKind::Exact => "exact",
    }
}

/// Fixed-width table: name, kind, value, integer value, note.
pub fn bounds_table(p: &Params, bounds: &[BoundValue]) -> String {
    let mut out = format!("n={} q={} d={}\n", p.n, p.q, p.d);
    out += &format!("{:<22} {:<9} {:<26} {:<12} {}\n", "bound", "kind", "value", "integer", "note");
    for b in bounds {
        let value = match (&b.value, b.applicable) {
            (Some(v), true) => v.to_string(),
            (Some(v), false) => format!("({v})"),
            (None, _) => "n/a".to_string(),
        };
        let integer = b.integer_value.as_ref().map_or(String::new(), |i| i.to_string());
        out +=
            &format!("{:<22} {:<9} {:<26} {:<12} {}\n", b.name, kind_label(b.kind), value, integer, b.condition_note);
    }
    out
}

/// How our closed-form bounds compare with the older ones at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n: u64,
    pub q: u64,
    pub d: u64,
    /// Which of the three closed forms applies (`thm25_eq6/7/8`), if any.
    pub thm25_name: String,
    pub thm25: Option<f64>,
    pub levenshtein_envelope: Option<f64>,
    pub thm25_below_envelope: Option<bool>,
    pub kk: Option<f64>,
    pub eq6_main_term: Option<f64>,
    pub kk_over_eq6_main: Option<f64>,
}

/// Comparisons are decided on exact rationals; the columns show floats.
pub fn comparison(p: &Params) -> Comparison {
    let f = |x: &Rational| insdel::combinat::rational_to_f64(x);
    let thm = thm25_upper(p);
    let thm_val = thm.rational().cloned();
    let env = levenshtein_envelope(p);
    let kk = kk_upper(p).rational().cloned();
    let main = (p.d >= 4 && p.d + 6 <= 2 * p.n).then(|| thm25_eq6_main(p.n, p.q, p.d));
    Comparison {
        n: p.n,
        q: p.q,
        d: p.d,
        thm25_name: thm.name.clone(),
        thm25: thm_val.as_ref().map(f),
        levenshtein_envelope: env.as_ref().map(f),
        thm25_below_envelope: thm_val.as_ref().zip(env.as_ref()).map(|(a, b)| a < b),
        kk: kk.as_ref().map(f),
        eq6_main_term: main.as_ref().map(f),
        // the main term vanishes when q <= s
        kk_over_eq6_main: kk.as_ref().zip(main.as_ref().filter(|m| !m.is_zero())).map(|(a, b)| f(&(a / b))),
    }
}

pub fn comparisons_to_csv(rows: &[Comparison]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
