//! Symmetric predicates `D : {0, ..., n} -> {0, 1}` and the combinatorics
//! around them: jump profile, shift/restriction, the reduction to uniform
//! instances, and communication matrices of `f(x, y) = D(|x ∩ y|)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{InstanceFamily, Subset, MAX_UNIVERSE};
use crate::matrix::DenseMatrix;

/// Largest `N = binomial(n, k)` for which an explicit `N x N` matrix is built.
pub const DEFAULT_MATRIX_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricPredicate {
    values: Vec<bool>,
}

impl SymmetricPredicate {
    pub fn new(values: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Predicate(String::new(), "no values".into()));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        Self {
            values: (0..=n).map(f).collect(),
        }
    }

    pub fn disjointness(n: usize) -> Self {
        Self::from_fn(n, |s| s == 0)
    }

    pub fn parity(n: usize) -> Self {
        Self::from_fn(n, |s| s % 2 == 1)
    }

    pub fn threshold(n: usize, l: usize) -> Self {
        Self::from_fn(n, |s| s >= l)
    }

    pub fn exact(n: usize, l: usize) -> Self {
        Self::from_fn(n, |s| s == l)
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self::from_fn(n, |_| value)
    }

    /// Parses a bitstring `"100...0"` (of length `n + 1`) or one of the named
    /// forms `disj`, `parity`, `thr:L`, `eq:L`. Named forms need `n`.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let bad = |why: &str| Error::Predicate(text.to_string(), why.to_string());
        let text_trim = text.trim();
        if !text_trim.is_empty() && text_trim.chars().all(|c| c == '0' || c == '1') {
            let values: Vec<bool> = text_trim.chars().map(|c| c == '1').collect();
            if let Some(n) = n {
                if values.len() != n + 1 {
                    return Err(bad(&format!(
                        "bitstring has length {}, expected n + 1 = {}",
                        values.len(),
                        n + 1
                    )));
                }
            }
            return Self::new(values);
        }
        let n = n.ok_or_else(|| bad("named predicates need n"))?;
        let (name, arg) = match text_trim.split_once(':') {
            Some((name, arg)) => {
                let l = arg
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("argument is not a nonnegative integer"))?;
                (name.trim(), Some(l))
            }
            None => (text_trim, None),
        };
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("disj", None) => Ok(Self::disjointness(n)),
            ("parity", None) => Ok(Self::parity(n)),
            ("thr", Some(l)) => Ok(Self::threshold(n, l)),
            ("eq", Some(l)) => Ok(Self::exact(n, l)),
            _ => Err(bad("expected a bitstring, disj, parity, thr:L or eq:L")),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn eval(&self, s: usize) -> bool {
        self.values[s]
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    pub fn complement(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| !v).collect(),
        }
    }

    /// Restriction to `{0, ..., k}`.
    pub fn restrict(&self, k: usize) -> Result<Self> {
        self.shift_restrict(0, k)
    }

    /// `(D - r)|_k`, i.e. `s -> D(r + s)` on `{0, ..., k}`.
    pub fn shift_restrict(&self, r: usize, k: usize) -> Result<Self> {
        let n = self.n();
        if r > n || k > n - r {
            return Err(Error::Precondition(format!(
                "shift r = {r}, restriction k = {k} need r <= n and k <= n - r (n = {n})"
            )));
        }
        Ok(Self {
            values: self.values[r..=r + k].to_vec(),
        })
    }

    pub fn jump_profile(&self) -> JumpProfile {
        let n = self.n();
        let changes = |l: usize| self.values[l] != self.values[l - 1];
        // For odd n the middle change (between floor(n/2) and ceil(n/2)) is
        // counted on the lower side, so every change is seen exactly once.
        let l0 = (1..=n.div_ceil(2)).rev().find(|&l| changes(l)).unwrap_or(0);
        let l1 = (n.div_ceil(2)..n)
            .find(|&l| changes(l + 1))
            .map_or(0, |l| n - l);
        JumpProfile { l0, l1 }
    }

    /// `(sqrt(n l0) + l1) log2 n`, the upper-bound shape with unit constant.
    pub fn upper_bound_estimate(&self) -> Result<f64> {
        let n = self.n();
        if n < 2 {
            return Err(Error::Precondition(format!("upper bound needs n >= 2, got {n}")));
        }
        let JumpProfile { l0, l1 } = self.jump_profile();
        Ok(((n as f64 * l0 as f64).sqrt() + l1 as f64) * (n as f64).log2())
    }
}

impl fmt::Display for SymmetricPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpProfile {
    pub l0: usize,
    pub l1: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub r: usize,
    pub k: usize,
}

impl ReductionParams {
    /// `k <= (n - r)/4`, `1 <= l - r <= k/4`, as integer inequalities.
    pub fn is_feasible(self, n: usize, l: usize) -> bool {
        self.r < l && self.r <= n && 4 * self.k <= n - self.r && 4 * (l - self.r) <= self.k
    }
}

/// Chooses the shift `r` and subset size `k` that reduce a jump at `l` in a
/// predicate on `{0..n}` to a uniform instance with a jump at `l - r <= k/4`.
///
/// For `16 l <= n` this is `(0, floor(n/4))`. Otherwise `r = ceil((16l - n)/15)`
/// and `k = floor((n - r)/4)`; if rounding breaks a condition, the feasible
/// pair maximising `k (l - r)` is taken instead.
pub fn reduction_params(n: usize, l: usize) -> Result<ReductionParams> {
    if l == 0 || l > n {
        return Err(Error::Precondition(format!(
            "reduction needs 1 <= l <= n, got l = {l}, n = {n}"
        )));
    }
    let infeasible = Error::ReductionInfeasible { n, l };
    if 16 * l <= n {
        let p = ReductionParams { r: 0, k: n / 4 };
        debug_assert!(p.is_feasible(n, l));
        return Ok(p);
    }
    let r = (16 * l - n).div_ceil(15);
    if r <= n {
        let p = ReductionParams { r, k: (n - r) / 4 };
        if p.is_feasible(n, l) {
            return Ok(p);
        }
    }
    (0..l)
        .map(|r| ReductionParams { r, k: (n - r) / 4 })
        .filter(|p| p.is_feasible(n, l))
        .max_by_key(|p| (p.k * (l - p.r), std::cmp::Reverse(p.r)))
        .ok_or(infeasible)
}

/// `x ∪ {n - r + 1, ..., n}` for `x ⊆ [n - r]`.
pub fn lift_instance(x: Subset, n: usize, r: usize) -> Result<Subset> {
    if r > n || n > MAX_UNIVERSE {
        return Err(Error::Precondition(format!("need r <= n <= 64, got r = {r}, n = {n}")));
    }
    if !x.is_within(n - r) {
        return Err(Error::Precondition(format!(
            "{:?} is not a subset of [{}]",
            x.elements(),
            n - r
        )));
    }
    let tail = (n - r + 1..=n).fold(0u64, |m, e| m | 1 << (e - 1));
    Ok(Subset(x.0 | tail))
}

/// The 0/1 matrix of `f(x, y) = D(|x ∩ y|)` over `fam × fam`.
pub fn comm_matrix(fam: &InstanceFamily, d: &SymmetricPredicate) -> Result<DenseMatrix> {
    if d.n() < fam.k() {
        return Err(Error::Precondition(format!(
            "predicate on {{0..{}}} cannot evaluate intersections up to k = {}",
            d.n(),
            fam.k()
        )));
    }
    let members = fam.members();
    Ok(DenseMatrix::from_fn(fam.len(), fam.len(), |i, j| {
        if d.eval(members[i].intersection_size(members[j])) {
            1.0
        } else {
            0.0
        }
    }))
}
