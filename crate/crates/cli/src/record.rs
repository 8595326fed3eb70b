use insdel::{BoundValue, Params};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointParams {
    pub n: u64,
    pub q: u64,
    pub d: u64,
}

impl From<&Params> for PointParams {
    fn from(p: &Params) -> Self {
        Self { n: p.n, q: p.q, d: p.d }
    }
}

/// One line of the cache and one row group of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub params: PointParams,
    pub bounds: Vec<BoundValue>,
    /// `D_q(n, d)` when a complete search established it.
    pub exact: Option<u64>,
    /// Codewords of a maximum code, one word per string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub tool_version: String,
}

impl ResultRecord {
    pub fn new(p: &Params, bounds: Vec<BoundValue>) -> Self {
        Self {
            params: p.into(),
            bounds,
            exact: None,
            witness: None,
            timestamp: now(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
