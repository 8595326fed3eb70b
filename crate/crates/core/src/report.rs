//! Every bound on `D_q(n, d)` at one point, in a fixed order.

use crate::bound::{BoundKind, BoundValue, Params};
use crate::error::{Error, Result};
use crate::lower_bounds::{gv_lower, matching_main_term, refined_gv_estimate};
use crate::lp_bound::{certificate_upper, lp_upper};
use crate::rs_construct::neighborhood_edge_bound;
use crate::upper_bounds::{all_upper_bounds, best_upper};

/// Upper bounds, the LP optimum and its closed-form dual, then lower bounds
/// and estimates. LP entries too large to solve come back not applicable.
pub fn all_bounds(p: &Params) -> Result<Vec<BoundValue>> {
    let mut out = all_upper_bounds(p);
    out.push(best_upper(p));
    for (name, b) in [("lp", lp_upper(p)), ("lp_dual_certificate", certificate_upper(p))] {
        out.push(match b {
            Ok(b) => b,
            Err(Error::Resource { needed, cap, .. }) => BoundValue::not_applicable(
                name,
                BoundKind::CertifiedUpper,
                format!("program too large ({needed} > {cap})"),
            ),
            Err(e) => return Err(e),
        });
    }
    out.push(gv_lower(p));
    out.push(matching_main_term(p));
    out.push(refined_gv_estimate(p));
    out.push(neighborhood_edge_bound(p.n, p.d));
    Ok(out)
}

/// Drops estimates, keeping certified and exact entries.
pub fn certified_only(bounds: Vec<BoundValue>) -> Vec<BoundValue> {
    bounds.into_iter().filter(|b| b.kind.is_certified()).collect()
}
