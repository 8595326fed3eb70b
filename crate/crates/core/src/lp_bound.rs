//! The linear-programming upper bound on `D_q(n, d)`.
//!
//! Variable `x_i` (for `1 <= i <= n`) stands for the number of codewords with
//! exactly `i` distinct symbols, suitably weighted; every constraint counts
//! length-`(s+1)` subsequences, `s = n - d/2`, which no two codewords may
//! share. The program is solved with an exact rational simplex, and every
//! optimum is re-certified through a feasible dual solution, so the reported
//! value is an upper bound by weak duality alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::bound::{BoundKind, BoundValue, Params};
use crate::combinat::{choose, choose_i, rat, surjection_count, Integer, Rational};
use crate::error::{Error, Result};

/// Largest `n` for which [`build_lp`] will construct the program.
pub const LP_MAX_N: u64 = 400;

/// One `<=` constraint: `sum coeffs[i] * x_{i+1} <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub label: String,
    pub coeffs: Vec<Integer>,
    pub rhs: Integer,
}

/// `maximize sum x_i` subject to `rows`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub n: u64,
    pub q: u64,
    pub s: u64,
    /// `ceil((s+1)/2)`: the smallest support size with its own row.
    pub h: u64,
    /// Whether `rows[0]` is the aggregated row for supports below `h`.
    pub has_aggregate: bool,
    pub rows: Vec<LpRow>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.n as usize
    }
}

/// `C(i + j - (s+1), 2j - (s+1))`.
pub fn lp_coeff(i: u64, j: u64, s: u64) -> Integer {
    choose_i(i as i64 + j as i64 - (s as i64 + 1), 2 * j as i64 - (s as i64 + 1))
}

/// `C(q, j)` times the number of surjections from `s+1` positions onto `j`
/// symbols: the number of length-`(s+1)` words with support exactly `j`.
pub fn lp_rhs(q: u64, j: u64, s: u64) -> Integer {
    choose(q, j as i64) * surjection_count((s + 1) as u32, j as u32)
}

/// The program bounding `D_q(n, 2n - 2s)`, for `1 <= s <= n-2`.
pub fn build_lp(n: u64, q: u64, s: u64) -> Result<LinearProgram> {
    if s < 1 || s + 2 > n {
        return Err(Error::Domain(format!("the LP needs 1 <= s <= n-2, got n = {n}, s = {s}")));
    }
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    if n > LP_MAX_N {
        return Err(Error::Resource { what: "LP variables".into(), needed: n as u128, cap: LP_MAX_N as u128 });
    }
    let h = (s + 2) / 2;
    let mut rows = Vec::new();
    if h > 1 {
        let coeffs = (1..=n).map(|i| if i < h { Integer::one() } else { Integer::zero() }).collect();
        let rhs = (1..h).map(|j| lp_rhs(q, j, s)).sum();
        rows.push(LpRow { label: "agg".into(), coeffs, rhs });
    }
    for j in h..=s + 1 {
        let coeffs =
            (1..=n).map(|i| if i >= j && i + s < n + j { lp_coeff(i, j, s) } else { Integer::zero() }).collect();
        rows.push(LpRow { label: format!("c{j}"), coeffs, rhs: lp_rhs(q, j, s) });
    }
    Ok(LinearProgram { n, q, s, h, has_aggregate: h > 1, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub optimum: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row.
    pub dual: Vec<Rational>,
}

/// Maximizes `c.x` subject to `a x <= b`, `x >= 0`, with `b >= 0`, by the
/// tableau simplex method under Bland's rule (which cannot cycle).
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let (m, n) = (a.len(), c.len());
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::Precondition("maximize needs a non-negative right-hand side".into()));
    }
    if a.iter().any(|r| r.len() != n) || b.len() != m {
        return Err(Error::Precondition("constraint matrix shape mismatch".into()));
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = Rational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    let mut z = vec![Rational::zero(); width];
    for j in 0..n {
        z[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Unsupported("the linear program is unbounded".into()));
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        let f = z[enter].clone();
        for (v, p) in z.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
        basis[r] = enter;
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            primal[bv] = t[i][width - 1].clone();
        }
    }
    let dual = z[n..n + m].to_vec();
    Ok(LpSolution { optimum: z[width - 1].clone(), primal, dual })
}

pub fn solve_lp_exact(lp: &LinearProgram) -> Result<LpSolution> {
    let c = vec![Rational::one(); lp.num_vars()];
    let a: Vec<Vec<Rational>> = lp.rows.iter().map(|r| r.coeffs.iter().cloned().map(rat).collect()).collect();
    let b: Vec<Rational> = lp.rows.iter().map(|r| rat(r.rhs.clone())).collect();
    let sol = maximize(&c, &a, &b).map_err(|e| match e {
        Error::Unsupported(m) => Error::Internal(m),
        other => other,
    })?;
    let dual_obj = check_row_multipliers(lp, &sol.dual)?;
    if dual_obj != sol.optimum {
        return Err(Error::Internal(format!("simplex dual value {dual_obj} differs from primal {}", sol.optimum)));
    }
    Ok(sol)
}

/// Checks `y >= 0` and `A^T y >= 1` against the primal rows and returns `b.y`.
fn check_row_multipliers(lp: &LinearProgram, y: &[Rational]) -> Result<Rational> {
    if y.len() != lp.rows.len() || y.iter().any(|v| v.is_negative()) {
        return Err(Error::Internal("simplex returned an invalid dual".into()));
    }
    for i in 0..lp.num_vars() {
        let lhs: Rational = lp.rows.iter().zip(y).map(|(r, v)| rat(r.coeffs[i].clone()) * v).sum();
        if lhs < Rational::one() {
            return Err(Error::Internal(format!("simplex dual violates the constraint for x_{}", i + 1)));
        }
    }
    Ok(lp.rows.iter().zip(y).map(|(r, v)| rat(r.rhs.clone()) * v).sum())
}

/// A dual point: `y0` multiplies the aggregated row, `y[j]` the row for support `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub y0: Rational,
    pub y: BTreeMap<u64, Rational>,
}

impl DualCertificate {
    /// The multipliers in the row order of [`build_lp`].
    pub fn row_multipliers(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut out = Vec::with_capacity(lp.rows.len());
        if lp.has_aggregate {
            out.push(self.y0.clone());
        }
        out.extend((lp.h..=lp.s + 1).map(|j| self.y.get(&j).cloned().unwrap_or_else(Rational::zero)));
        out
    }
}

/// The closed-form dual point for the program of [`build_lp`].
pub fn dual_certificate(n: u64, q: u64, s: u64) -> Result<DualCertificate> {
    let lp = build_lp(n, q, s)?;
    let h = lp.h;
    let inv = |x: Integer| Rational::new(Integer::one(), x);
    let mut y = BTreeMap::new();
    let y0 = match s {
        1 => {
            y.insert(1, Rational::one());
            y.insert(2, inv(choose(n, 2)));
            Rational::zero()
        }
        2 => {
            y.insert(2, Rational::one());
            y.insert(3, inv(choose(n, 3)));
            Rational::one()
        }
        _ => {
            let top = lp_coeff(n, s + 1, s);
            y.insert(h, Rational::one());
            for j in h + 1..s {
                y.insert(j, inv(lp_coeff(n + j - (s + 1), j, s)));
            }
            let ys =
                (Rational::one() - Rational::new(lp_coeff(n - 1, s + 1, s), top.clone())) / rat(lp_coeff(n - 1, s, s));
            y.insert(s, ys);
            y.insert(s + 1, inv(top));
            Rational::one()
        }
    };
    Ok(DualCertificate { y0, y })
}

/// The dual constraints written out per primal variable `x_i`, as
/// coefficient rows over `(y0, y_h, ..., y_{s+1})`, each with right side 1.
pub fn explicit_dual_rows(n: u64, s: u64) -> Vec<Vec<Integer>> {
    let h = (s + 2) / 2;
    let width = (s + 3 - h) as usize;
    let col = |j: u64| (j - h + 1) as usize;
    (1..=n)
        .map(|i| {
            let mut r = vec![Integer::zero(); width];
            if i < h {
                r[0] = Integer::one();
                return r;
            }
            let lo = if i <= n - s.div_ceil(2) { h } else { i + s + 1 - n };
            for j in lo..=i.min(s + 1) {
                r[col(j)] = lp_coeff(i, j, s);
            }
            r
        })
        .collect()
}

/// Checks the dual constraints of [`explicit_dual_rows`] and non-negativity;
/// returns whether they hold and the dual objective. When feasible, the
/// objective bounds the LP optimum from above by weak duality.
pub fn verify_dual_feasible(lp: &LinearProgram, cert: &DualCertificate) -> (bool, Rational) {
    let (s, h) = (lp.s, lp.h);
    let mut vars = vec![cert.y0.clone()];
    vars.extend((h..=s + 1).map(|j| cert.y.get(&j).cloned().unwrap_or_else(Rational::zero)));
    let stray = cert.y.keys().any(|&j| j < h || j > s + 1);
    let nonneg = !vars.iter().any(|v| v.is_negative());
    let rows_ok = explicit_dual_rows(lp.n, s)
        .iter()
        .all(|row| row.iter().zip(&vars).map(|(a, v)| rat(a.clone()) * v).sum::<Rational>() >= Rational::one());
    let agg: Integer = (1..h).map(|j| lp_rhs(lp.q, j, s)).sum();
    let mut objective = rat(agg) * &cert.y0;
    for j in h..=s + 1 {
        objective += rat(lp_rhs(lp.q, j, s)) * &vars[(j - h + 1) as usize];
    }
    (nonneg && rows_ok && !stray, objective)
}

/// The LP optimum for `s = n - d/2` as a certified upper bound.
pub fn lp_upper(p: &Params) -> Result<BoundValue> {
    const NAME: &str = "lp";
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return Ok(BoundValue::not_applicable(NAME, BoundKind::CertifiedUpper, "needs 4 <= d <= 2n-2"));
    }
    let lp = build_lp(p.n, p.q, p.s())?;
    let sol = solve_lp_exact(&lp)?;
    Ok(BoundValue::exact_value(NAME, BoundKind::CertifiedUpper, sol.optimum, format!("s={}, dual-certified", lp.s)))
}

/// The objective of the closed-form dual point, after checking feasibility.
pub fn certificate_upper(p: &Params) -> Result<BoundValue> {
    const NAME: &str = "lp_dual_certificate";
    if p.d < 4 || p.d > 2 * p.n - 2 {
        return Ok(BoundValue::not_applicable(NAME, BoundKind::CertifiedUpper, "needs 4 <= d <= 2n-2"));
    }
    let lp = build_lp(p.n, p.q, p.s())?;
    let cert = dual_certificate(p.n, p.q, p.s())?;
    match verify_dual_feasible(&lp, &cert) {
        (true, obj) => Ok(BoundValue::exact_value(NAME, BoundKind::CertifiedUpper, obj, format!("s={}", lp.s))),
        (false, _) => Err(Error::Internal(format!("closed-form dual point infeasible at {p}"))),
    }
}

/// The program in CPLEX LP text format, for cross-checking with an external solver.
pub fn to_lp_format(lp: &LinearProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ D_q(n,d) linear program, n={} q={} d={} s={}", lp.n, lp.q, 2 * (lp.n - lp.s), lp.s);
    out.push_str("Maximize\n obj:");
    for i in 1..=lp.n {
        let _ = write!(out, "{} x{i}", if i == 1 { "" } else { " +" });
    }
    out.push_str("\nSubject To\n");
    for row in &lp.rows {
        let _ = write!(out, " {}:", row.label);
        let mut first = true;
        for (i, c) in row.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let _ = write!(out, "{} {c} x{}", if first { "" } else { " +" }, i + 1);
            first = false;
        }
        let _ = writeln!(out, " <= {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for i in 1..=lp.n {
        let _ = writeln!(out, " x{i} >= 0");
    }
    out.push_str("End\n");
    out
}
