//! Parameter triples and the named bound values every evaluator returns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{ceil, floor, log10_abs, rational_to_f64, Integer, Rational};
use crate::error::{domain, Result};

/// `(n, q, d)` with `d` even and `2 <= d <= 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub n: u64,
    pub q: u64,
    pub d: u64,
    /// Set when the caller asked for an odd distance and got `d + 1`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized_from_odd: bool,
}

impl Params {
    /// Validates and normalizes. Equal-length words are always an even
    /// edit distance apart, so an odd `d` is promoted to `d + 1`.
    pub fn new(n: u64, q: u64, d: u64) -> Result<Self> {
        if n < 2 {
            return domain(format!("n must be at least 2, got {n}"));
        }
        if q < 2 {
            return domain(format!("q must be at least 2, got {q}"));
        }
        let (d, normalized_from_odd) = if d % 2 == 1 { (d + 1, true) } else { (d, false) };
        if d < 2 || d > 2 * n {
            return domain(format!("d must lie in [2, 2n] = [2, {}], got {d}", 2 * n));
        }
        Ok(Self { n, q, d, normalized_from_odd })
    }

    pub fn half_d(&self) -> u64 {
        self.d / 2
    }

    /// `s = n - d/2`, the LP index.
    pub fn s(&self) -> u64 {
        self.n - self.d / 2
    }

    /// `t = d/2 - 1`, the number of correctable deletions.
    pub fn t(&self) -> u64 {
        self.d / 2 - 1
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, q={}, d={})", self.n, self.q, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    CertifiedUpper,
    CertifiedLower,
    Estimate,
    Exact,
}

impl BoundKind {
    pub fn is_certified(self) -> bool {
        !matches!(self, BoundKind::Estimate)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::CertifiedUpper => "upper",
            BoundKind::CertifiedLower => "lower",
            BoundKind::Estimate => "estimate",
            BoundKind::Exact => "exact",
        };
        f.write_str(s)
    }
}

/// A non-certified real value, kept with its decimal logarithm so that
/// astronomically large estimates stay printable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    #[serde(with = "crate::serde_rational::float")]
    pub value: f64,
    #[serde(with = "crate::serde_rational::float")]
    pub log10_abs: f64,
}

impl Approx {
    pub fn from_f64(value: f64) -> Self {
        Self { value, log10_abs: value.abs().log10() }
    }

    /// From a natural log of a positive quantity.
    pub fn from_ln(ln: f64) -> Self {
        let log10_abs = ln / std::f64::consts::LN_10;
        Self { value: ln.exp(), log10_abs }
    }

    pub fn from_rational(x: &Rational) -> Self {
        let value = rational_to_f64(x);
        let log10_abs = if value == 0.0 { f64::NEG_INFINITY } else { log10_abs(x) };
        Self { value, log10_abs }
    }

    pub fn scientific(&self) -> String {
        if self.value == 0.0 {
            return "0".into();
        }
        if self.value.is_finite() {
            return format!("{:.6e}", self.value);
        }
        let e = (self.log10_abs + 1e-9).floor();
        let m = 10f64.powf((self.log10_abs - e).max(0.0));
        let sign = if self.value < 0.0 { "-" } else { "" };
        format!("{sign}{m:.6}e{e}")
    }
}

/// Serialized untagged: `{"num", "den"}` for exact values and
/// `{"value", "log10_abs"}` for approximations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundNumber {
    Exact(#[serde(with = "crate::serde_rational")] Rational),
    Approx(Approx),
}

impl BoundNumber {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            BoundNumber::Exact(r) => Some(r),
            BoundNumber::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundNumber::Exact(r) => rational_to_f64(r),
            BoundNumber::Approx(a) => a.value,
        }
    }
}

impl fmt::Display for BoundNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundNumber::Exact(r) => write!(f, "{r}"),
            BoundNumber::Approx(a) => write!(f, "~{}", a.scientific()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub name: String,
    pub kind: BoundKind,
    pub value: Option<BoundNumber>,
    /// Floor for uppers, ceiling for lowers, the value itself for exact
    /// results; absent for estimates.
    #[serde(with = "crate::serde_rational::opt_int")]
    pub integer_value: Option<Integer>,
    pub applicable: bool,
    pub condition_note: String,
}

impl BoundValue {
    pub fn exact_value(name: &str, kind: BoundKind, value: Rational, note: impl Into<String>) -> Self {
        let integer_value = match kind {
            BoundKind::CertifiedUpper => Some(floor(&value)),
            BoundKind::CertifiedLower => Some(ceil(&value)),
            BoundKind::Exact => Some(floor(&value)),
            BoundKind::Estimate => None,
        };
        Self {
            name: name.into(),
            kind,
            value: Some(BoundNumber::Exact(value)),
            integer_value,
            applicable: true,
            condition_note: note.into(),
        }
    }

    pub fn approx(name: &str, value: Approx, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: BoundKind::Estimate,
            value: Some(BoundNumber::Approx(value)),
            integer_value: None,
            applicable: true,
            condition_note: note.into(),
        }
    }

    pub fn not_applicable(name: &str, kind: BoundKind, why: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind,
            value: None,
            integer_value: None,
            applicable: false,
            condition_note: why.into(),
        }
    }

    pub fn rational(&self) -> Option<&Rational> {
        self.value.as_ref().and_then(BoundNumber::as_rational)
    }

    /// Applicable and certified (upper, lower or exact).
    pub fn is_certified(&self) -> bool {
        self.applicable && self.kind.is_certified()
    }

    pub fn is_upper(&self) -> bool {
        self.applicable && matches!(self.kind, BoundKind::CertifiedUpper | BoundKind::Exact)
    }

    pub fn is_lower(&self) -> bool {
        self.applicable && matches!(self.kind, BoundKind::CertifiedLower | BoundKind::Exact)
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.value, self.applicable) {
            (Some(v), true) => write!(f, "{} [{}] = {}", self.name, self.kind, v),
            _ => write!(f, "{} [n/a: {}]", self.name, self.condition_note),
        }
    }
}
