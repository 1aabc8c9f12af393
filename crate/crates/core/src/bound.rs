//! End-to-end lower and upper bound figures for a predicate `D` on `{0..n}`.
//!
//! Each nontrivial side of the jump profile is reduced to a uniform instance
//! `f_{n-r,k,D'}` with `D' = (D - r)|_k` and run through [`chain_report`].
//! A side whose reduction has no integer solution is reported, not failed.

use serde::Serialize;

use crate::approx::{chain_report, BoundReport, Precision};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::predicate::{reduction_params, SymmetricPredicate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    L0,
    L1,
}

#[derive(Debug, Clone, Serialize)]
pub struct SideReport {
    pub side: Side,
    /// Position `j` with `D(j) != D(j - 1)` that this side reduces.
    pub jump: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub n: usize,
    pub k: Option<usize>,
    pub predicate: String,
    pub l0: usize,
    pub l1: usize,
    pub approx_degree: Option<usize>,
    pub t0: Option<usize>,
    pub phi: Option<f64>,
    #[serde(rename = "log2_phi_over_N")]
    pub log2_phi_over_n: Option<f64>,
    pub lower_bound: f64,
    pub upper_estimate: Option<f64>,
    pub checks: Vec<Check>,
    pub sides: Vec<SideReport>,
}

impl FullReport {
    pub fn passed(&self) -> bool {
        self.sides
            .iter()
            .filter_map(|s| s.chain.as_ref())
            .flat_map(|c| &c.checks)
            .chain(&self.checks)
            .all(|c| c.passed)
    }

    pub fn csv_header() -> &'static str {
        "n,k,predicate,l0,l1,approx_degree,t0,phi,log2_phi_over_N,lower_bound,upper_estimate,checks_passed"
    }

    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            opt(&self.k),
            self.predicate,
            self.l0,
            self.l1,
            opt(&self.approx_degree),
            opt(&self.t0),
            opt(&self.phi),
            opt(&self.log2_phi_over_n),
            self.lower_bound,
            opt(&self.upper_estimate),
            self.passed()
        )
    }
}

fn side_report(
    d: &SymmetricPredicate,
    side: Side,
    jump: usize,
    eps: f64,
    precision: Precision,
) -> Result<SideReport> {
    let n = d.n();
    let mut rep = SideReport {
        side,
        jump,
        r: None,
        k: None,
        chain: None,
        note: None,
    };
    let params = match reduction_params(n, jump) {
        Ok(p) => p,
        Err(e @ Error::ReductionInfeasible { .. }) => {
            rep.note = Some(e.to_string());
            return Ok(rep);
        }
        Err(e) => return Err(e),
    };
    rep.r = Some(params.r);
    rep.k = Some(params.k);
    let reduced = d.shift_restrict(params.r, params.k)?;
    rep.chain = Some(chain_report(
        n - params.r,
        params.k,
        &reduced,
        jump - params.r,
        eps,
        precision,
    )?);
    Ok(rep)
}

/// Jump profile, reductions, lower-bound chains and the upper-bound shape.
/// The headline figures come from the side with the larger `log2(phi/N)`.
pub fn bound_report(d: &SymmetricPredicate, eps: f64, precision: Precision) -> Result<FullReport> {
    let n = d.n();
    let profile = d.jump_profile();
    let mut sides = Vec::new();
    if profile.l0 > 0 {
        sides.push(side_report(d, Side::L0, profile.l0, eps, precision)?);
    }
    if profile.l1 > 0 {
        sides.push(side_report(d, Side::L1, n - profile.l1 + 1, eps, precision)?);
    }
    let best = sides
        .iter()
        .filter_map(|s| s.chain.as_ref())
        .max_by(|a, b| a.log2_phi_over_n.total_cmp(&b.log2_phi_over_n));
    let finite = |x: f64| x.is_finite().then_some(x);
    let mut checks = Vec::new();
    if let Some(b) = best {
        checks.extend(b.checks.iter().cloned());
    }
    let upper_estimate = d.upper_bound_estimate().ok();
    Ok(FullReport {
        n,
        k: best.map(|b| b.k),
        predicate: d.to_string(),
        l0: profile.l0,
        l1: profile.l1,
        approx_degree: best.map(|b| b.approx_degree),
        t0: best.map(|b| b.t0),
        phi: best.map(|b| b.phi),
        log2_phi_over_n: best.and_then(|b| finite(b.log2_phi_over_n)),
        lower_bound: best.map_or(0.0, |b| b.lower_bound),
        upper_estimate,
        checks,
        sides,
    })
}
