//! The Johnson scheme on `[n]^k`: intersection matrices `J_{n,k,s}`, their
//! exact eigenvalues (Knuth's closed form for the Hahn polynomials), and the
//! normalised discrepancy test `mu_s = J_{n,k,s} / (N C(k,s) C(n-k,k-s))`.
//!
//! All eigenvalues are exact big rationals. The alternating sum has terms far
//! larger than the result, so floating evaluation is not an option.

mod oracle;

pub use oracle::{eigenspace_oracle, EigenspaceOracle, ORACLE_BUDGET};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinat::binomial_big;
use crate::error::{Error, Result};
use crate::family::InstanceFamily;
use crate::matrix::{DenseMatrix, ExactMatrix};

fn check_scheme(n: usize, k: usize) -> Result<()> {
    if 2 * k > n {
        return Err(Error::Precondition(format!(
            "Johnson scheme needs k <= n/2, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// `J_{n,k,s}`: 1 where `|x ∩ y| = s`.
pub fn intersection_matrix(n: usize, k: usize, s: usize, budget: usize) -> Result<DenseMatrix> {
    if s > k {
        return Err(Error::Precondition(format!("s = {s} exceeds k = {k}")));
    }
    let fam = InstanceFamily::new(n, k, budget)?;
    let m = fam.members();
    Ok(DenseMatrix::from_fn(fam.len(), fam.len(), |i, j| {
        if m[i].intersection_size(m[j]) == s {
            1.0
        } else {
            0.0
        }
    }))
}

/// Row degree of `J_{n,k,s}`: `C(k,s) C(n-k,k-s)`.
pub fn valency(n: usize, k: usize, s: usize) -> BigInt {
    binomial_big(k as i64, s as i64) * binomial_big((n - k) as i64, (k - s) as i64)
}

/// `N C(k,s) C(n-k,k-s)`: the number of pairs with `|x ∩ y| = s`, i.e. the
/// l1 norm of `J_{n,k,s}`.
pub fn mu_normalizer(n: usize, k: usize, s: usize) -> BigInt {
    binomial_big(n as i64, k as i64) * valency(n, k, s)
}

/// The normalised test matrix `mu_s`, exactly.
pub fn test_matrix_exact(n: usize, k: usize, s: usize, budget: usize) -> Result<ExactMatrix> {
    if s > k {
        return Err(Error::Precondition(format!("s = {s} exceeds k = {k}")));
    }
    let fam = InstanceFamily::new(n, k, budget)?;
    let w = BigRational::new(BigInt::one(), mu_normalizer(n, k, s));
    let zero = BigRational::zero();
    let m = fam.members();
    Ok(ExactMatrix::from_fn(fam.len(), fam.len(), |i, j| {
        if m[i].intersection_size(m[j]) == s {
            w.clone()
        } else {
            zero.clone()
        }
    }))
}

/// Eigenvalue of `J_{n,k,s}` on the eigenspace `E_t`:
/// `sum_i (-1)^(t-i) C(t,i) C(k-i,s-i) C(n-k-t+i,k-s-t+i)` for
/// `max(0, s+t-k) <= i <= min(s,t)`; an empty range gives 0.
pub fn hahn_eigenvalue(n: usize, k: usize, s: usize, t: usize) -> Result<BigInt> {
    check_scheme(n, k)?;
    if s > k || t > k {
        return Err(Error::Precondition(format!(
            "need s, t <= k = {k}, got s = {s}, t = {t}"
        )));
    }
    let (n, k, s, t) = (n as i64, k as i64, s as i64, t as i64);
    let lo = (s + t - k).max(0);
    let hi = s.min(t);
    let mut acc = BigInt::zero();
    for i in lo..=hi {
        let term = binomial_big(t, i)
            * binomial_big(k - i, s - i)
            * binomial_big(n - k - t + i, k - s - t + i);
        if (t - i) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Eigenvalue of `mu_s` on `E_t`.
pub fn normalized_eigenvalue(n: usize, k: usize, s: usize, t: usize) -> Result<BigRational> {
    Ok(BigRational::new(
        hahn_eigenvalue(n, k, s, t)?,
        mu_normalizer(n, k, s),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HahnTable {
    pub n: usize,
    pub k: usize,
    /// `raw[s][t]`: eigenvalue of `J_{n,k,s}` on `E_t` (an integer).
    pub raw: Vec<Vec<BigInt>>,
    /// `lambda[s][t]`: eigenvalue of `mu_s` on `E_t`.
    pub lambda: Vec<Vec<BigRational>>,
}

pub fn hahn_table(n: usize, k: usize) -> Result<HahnTable> {
    check_scheme(n, k)?;
    let mut raw = Vec::with_capacity(k + 1);
    let mut lambda = Vec::with_capacity(k + 1);
    for s in 0..=k {
        let row: Vec<BigInt> = (0..=k)
            .map(|t| hahn_eigenvalue(n, k, s, t))
            .collect::<Result<_>>()?;
        let norm = mu_normalizer(n, k, s);
        lambda.push(
            row.iter()
                .map(|v| BigRational::new(v.clone(), norm.clone()))
                .collect(),
        );
        raw.push(row);
    }
    Ok(HahnTable { n, k, raw, lambda })
}

impl HahnTable {
    /// CSV rows `s,t,numerator,denominator` under a `n,k` header line.
    pub fn to_csv(&self, normalized: bool) -> String {
        let mut out = format!("n,k\n{},{}\ns,t,numerator,denominator\n", self.n, self.k);
        for s in 0..=self.k {
            for t in 0..=self.k {
                let (num, den) = if normalized {
                    let v = &self.lambda[s][t];
                    (v.numer().clone(), v.denom().clone())
                } else {
                    (self.raw[s][t].clone(), BigInt::one())
                };
                out.push_str(&format!("{s},{t},{num},{den}\n"));
            }
        }
        out
    }
}

/// The `(floor(k/2) + 1)`-dimensional test `mu_0, ..., mu_{floor(k/2)}` with
/// its shared eigenspaces `E_0, ..., E_k`, represented by trace vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyTest {
    pub n: usize,
    pub k: usize,
    /// Number of test matrices.
    pub r: usize,
    /// `trace_vectors[t][s] = lambda_{st}` for `s < r`, one vector per `E_t`.
    #[serde(skip)]
    pub trace_vectors: Vec<Vec<BigRational>>,
    /// `dim E_t`, filled in from the eigenspace oracle when requested.
    pub multiplicities: Option<Vec<usize>>,
}

pub fn build_test(n: usize, k: usize) -> Result<DiscrepancyTest> {
    let table = hahn_table(n, k)?;
    let r = k / 2 + 1;
    let trace_vectors = (0..=k)
        .map(|t| (0..r).map(|s| table.lambda[s][t].clone()).collect())
        .collect();
    Ok(DiscrepancyTest {
        n,
        k,
        r,
        trace_vectors,
        multiplicities: None,
    })
}

impl DiscrepancyTest {
    /// `N = C(n, k)`.
    pub fn size(&self) -> BigInt {
        binomial_big(self.n as i64, self.k as i64)
    }

    /// Trace vectors multiplied by `N`; entries are O(1) regardless of `n`.
    pub fn scaled_trace_vectors(&self) -> Vec<Vec<BigRational>> {
        let n = BigRational::from_integer(self.size());
        self.trace_vectors
            .iter()
            .map(|v| v.iter().map(|x| x * &n).collect())
            .collect()
    }

    pub fn trace_vectors_f64(&self) -> Vec<Vec<f64>> {
        self.trace_vectors
            .iter()
            .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    /// Attaches `dim E_t` as measured by the eigenspace oracle.
    pub fn with_oracle_multiplicities(mut self, seed: u64) -> Result<Self> {
        let oracle = eigenspace_oracle(self.n, self.k, seed)?;
        self.multiplicities = Some(oracle.multiplicities);
        Ok(self)
    }
}

/// `N^-1 (s/k + (k-s)/(n-k))^t`, which dominates `|lambda_{st}|` for
/// `k <= n/4`, `s <= k/2`.
pub fn decay_bound_exact(n: usize, k: usize, s: usize, t: usize) -> Result<BigRational> {
    if k == 0 || 4 * k > n || 2 * s > k {
        return Err(Error::Precondition(format!(
            "decay bound holds for 1 <= k <= n/4, s <= k/2; got n = {n}, k = {k}, s = {s}"
        )));
    }
    let big = |x: usize| BigInt::from(x);
    let base = BigRational::new(big(s), big(k)) + BigRational::new(big(k - s), big(n - k));
    let mut pow = BigRational::one();
    for _ in 0..t {
        pow *= &base;
    }
    Ok(pow / BigRational::from_integer(binomial_big(n as i64, k as i64)))
}

pub fn decay_bound(n: usize, k: usize, s: usize, t: usize) -> Result<f64> {
    Ok(decay_bound_exact(n, k, s, t)?.to_f64().unwrap_or(f64::NAN))
}

/// `|lambda_{st}| <= decay_bound(n, k, s, t)`, decided exactly.
pub fn decay_holds(n: usize, k: usize, s: usize, t: usize) -> Result<bool> {
    Ok(normalized_eigenvalue(n, k, s, t)?.abs() <= decay_bound_exact(n, k, s, t)?)
}
