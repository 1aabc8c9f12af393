//! Linear-programming side of the lower bound: best uniform polynomial
//! approximation on `{0, ..., n}`, approximate degree, the convex-hull
//! functional `phi^eps(xi, T)`, and the assembled bound chain for one
//! uniform instance `f_{n,k,D}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::check::{rational_opt, Check};
use crate::error::{Error, Result};
use crate::johnson::build_test;
use crate::lp::{LinearProgram, Relation, Scalar, FLOAT_TOLERANCE};
use crate::predicate::SymmetricPredicate;

/// Largest grid on which `Precision::Auto` still solves LPs exactly.
pub const EXACT_GRID_LIMIT: usize = 24;
pub const DEFAULT_EPS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    Float,
    #[default]
    Auto,
}

impl Precision {
    pub fn is_exact_for(self, grid: usize) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Float => false,
            Precision::Auto => grid <= EXACT_GRID_LIMIT,
        }
    }
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn one_third() -> BigRational {
    rational(1, 3)
}

fn to_f64(r: &BigRational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn exact_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Precondition(format!("{x} is not finite")))
}

/// A polynomial in the Chebyshev basis of `[0, n]` (`T_j(2s/n - 1)`).
#[derive(Debug, Clone, Serialize)]
pub struct PolyApprox {
    pub n: usize,
    pub degree: usize,
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub exact_coefficients: Option<Vec<BigRational>>,
    /// Optimal `max_s |p(s) - D(s)|`.
    pub error: f64,
    #[serde(serialize_with = "rational_opt")]
    pub exact_error: Option<BigRational>,
}

impl PolyApprox {
    /// Clenshaw evaluation at `s` in floating point.
    pub fn eval(&self, s: f64) -> f64 {
        let x = grid_point_f64(s, self.n);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients.first().copied().unwrap_or(0.0) + x * b1 - b2
    }

    /// `max_s |p(s) - D(s)|` recomputed from the coefficients.
    pub fn recomputed_error(&self, d: &SymmetricPredicate) -> f64 {
        (0..=d.n())
            .map(|s| (self.eval(s as f64) - if d.eval(s) { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }
}

fn grid_point_f64(s: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * s / n as f64 - 1.0
    }
}

fn chebyshev_rows<T: Scalar>(n: usize, degree: usize) -> Vec<Vec<T>> {
    (0..=n)
        .map(|s| {
            let x = if n == 0 {
                T::zero()
            } else {
                T::from_int(2 * s as i64) / T::from_int(n as i64) - T::one()
            };
            let mut row = Vec::with_capacity(degree + 1);
            row.push(T::one());
            if degree >= 1 {
                row.push(x.clone());
            }
            for j in 2..=degree {
                let next = T::from_int(2) * x.clone() * row[j - 1].clone() - row[j - 2].clone();
                row.push(next);
            }
            row
        })
        .collect()
}

fn solve_poly<T: Scalar>(d: &SymmetricPredicate, degree: usize) -> Result<(Vec<T>, T)> {
    let n = d.n();
    let rows = chebyshev_rows::<T>(n, degree);
    let mut objective = vec![T::zero(); degree + 2];
    objective[degree + 1] = T::one();
    let mut lp = LinearProgram::minimize(objective);
    for j in 0..=degree {
        lp.set_free(j);
    }
    for (s, basis) in rows.into_iter().enumerate() {
        let target = if d.eval(s) { T::one() } else { T::zero() };
        let mut upper = basis.clone();
        upper.push(-T::one());
        let mut lower = basis;
        lower.push(T::one());
        lp.constrain(upper, Relation::Le, target.clone());
        lp.constrain(lower, Relation::Ge, target);
    }
    let sol = lp.solve()?;
    let mut x = sol.x;
    let err = x.pop().expect("error variable");
    Ok((x, err))
}

/// Best uniform approximation of `D` on `{0..n}` by polynomials of degree `<= degree`.
pub fn best_poly_approx(
    d: &SymmetricPredicate,
    degree: usize,
    precision: Precision,
) -> Result<PolyApprox> {
    let n = d.n();
    if degree > n {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds grid size n = {n}"
        )));
    }
    if precision.is_exact_for(n) {
        let (coeffs, err) = solve_poly::<BigRational>(d, degree)?;
        Ok(PolyApprox {
            n,
            degree,
            coefficients: coeffs.iter().map(to_f64).collect(),
            error: to_f64(&err),
            exact_coefficients: Some(coeffs),
            exact_error: Some(err),
        })
    } else {
        let (coeffs, err) = solve_poly::<f64>(d, degree)?;
        Ok(PolyApprox {
            n,
            degree,
            coefficients: coeffs,
            error: err.max(0.0),
            exact_coefficients: None,
            exact_error: None,
        })
    }
}

impl PolyApprox {
    /// `error <= 1/3`, exactly when an exact error is available.
    pub fn within_third(&self) -> bool {
        match &self.exact_error {
            Some(e) => *e <= one_third(),
            None => self.error <= 1.0 / 3.0 + FLOAT_TOLERANCE,
        }
    }
}

/// Least `d` whose best approximation error is at most `1/3`.
pub fn approx_degree(d: &SymmetricPredicate, precision: Precision) -> Result<usize> {
    for degree in 0..=d.n() {
        if best_poly_approx(d, degree, precision)?.within_third() {
            return Ok(degree);
        }
    }
    // degree n interpolates exactly; only reachable through solver trouble
    Err(Error::NoConvergence("approximate degree scan", d.n() + 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiCertificate {
    /// `C = phi^eps(xi, T)`.
    pub value: f64,
    #[serde(serialize_with = "rational_opt")]
    pub exact_value: Option<BigRational>,
    pub eps: f64,
    /// `a_t` with `sum |a_t| = C`.
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub exact_coefficients: Option<Vec<BigRational>>,
    /// `xi - sum_t a_t lambda^t`.
    pub residual: Vec<f64>,
}

impl PhiCertificate {
    pub fn l1_coefficients(&self) -> f64 {
        self.coefficients.iter().map(|a| a.abs()).sum()
    }

    pub fn residual_linf(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn solve_phi<T: Scalar>(xi: &[T], trace: &[Vec<T>], eps: &T) -> Result<(T, Vec<T>, Vec<T>)> {
    let r = xi.len();
    if trace.iter().any(|v| v.len() != r) {
        return Err(Error::Shape(format!(
            "trace vectors must all have dimension {r}"
        )));
    }
    if *eps < T::zero() {
        return Err(Error::Precondition("eps must be >= 0".into()));
    }
    let m = trace.len();
    // a_t = plus_t - minus_t, both nonnegative
    let mut lp = LinearProgram::minimize(vec![T::one(); 2 * m]);
    for s in 0..r {
        let mut row = Vec::with_capacity(2 * m);
        row.extend(trace.iter().map(|v| v[s].clone()));
        row.extend(trace.iter().map(|v| -v[s].clone()));
        if eps.is_zero() {
            lp.constrain(row, Relation::Eq, xi[s].clone());
        } else {
            lp.constrain(row.clone(), Relation::Le, xi[s].clone() + eps.clone());
            lp.constrain(row, Relation::Ge, xi[s].clone() - eps.clone());
        }
    }
    let sol = lp.solve()?;
    let coeffs: Vec<T> = (0..m)
        .map(|t| sol.x[t].clone() - sol.x[m + t].clone())
        .collect();
    let residual = (0..r)
        .map(|s| {
            trace
                .iter()
                .zip(&coeffs)
                .fold(xi[s].clone(), |acc, (v, a)| acc - a.clone() * v[s].clone())
        })
        .collect();
    Ok((sol.objective, coeffs, residual))
}

/// `phi^eps(xi, T) = min { C : rho_inf(xi, Conv_C(T)) <= eps }` in floating point.
pub fn phi_epsilon(xi: &[f64], trace: &[Vec<f64>], eps: f64) -> Result<PhiCertificate> {
    let (value, coeffs, residual) = solve_phi(xi, trace, &eps)?;
    Ok(PhiCertificate {
        value: value.max(0.0),
        exact_value: None,
        eps,
        coefficients: coeffs,
        exact_coefficients: None,
        residual,
    })
}

/// `phi^eps(xi, T)` in exact arithmetic.
pub fn phi_epsilon_exact(
    xi: &[BigRational],
    trace: &[Vec<BigRational>],
    eps: &BigRational,
) -> Result<PhiCertificate> {
    let (value, coeffs, residual) = solve_phi(xi, trace, eps)?;
    Ok(PhiCertificate {
        value: to_f64(&value),
        exact_value: Some(value),
        eps: to_f64(eps),
        coefficients: coeffs.iter().map(to_f64).collect(),
        exact_coefficients: Some(coeffs),
        residual: residual.iter().map(to_f64).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceLowerBound {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    /// `phi^eps(D|_{k/2}, Trace)`, a lower bound on the eps-approximate trace norm.
    pub phi: f64,
    /// `phi / N`.
    pub ratio: f64,
    #[serde(serialize_with = "rational_opt")]
    pub exact_ratio: Option<BigRational>,
    /// Certificate against the trace vectors scaled by `N`; its value is `ratio`.
    pub certificate: PhiCertificate,
}

impl TraceLowerBound {
    pub fn log2_ratio(&self) -> f64 {
        match &self.exact_ratio {
            Some(r) if r.is_positive() => log2_rational(r),
            _ => self.ratio.log2(),
        }
    }
}

fn log2_rational(r: &BigRational) -> f64 {
    let (num, den) = (r.numer(), r.denom());
    let shift = num.bits() as i64 - den.bits() as i64;
    // rescale so both parts fit comfortably in f64
    let (num, den) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    shift as f64 + (to_f64(&BigRational::new(num, den))).log2()
}

/// Lower bound on the eps-approximate trace norm of `M_{f_{n,k,D}}` through
/// the `(floor(k/2)+1)`-dimensional Johnson test. Works on trace vectors only;
/// the `N x N` matrix is never formed.
pub fn trace_lower_bound(
    n: usize,
    k: usize,
    d: &SymmetricPredicate,
    eps: f64,
    precision: Precision,
) -> Result<TraceLowerBound> {
    if d.n() < k {
        return Err(Error::Precondition(format!(
            "predicate on {{0..{}}} is too short for k = {k}",
            d.n()
        )));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Precondition(format!("eps must be >= 0, got {eps}")));
    }
    let test = build_test(n, k)?;
    let half = k / 2;
    let size = test.size();
    let scaled = test.scaled_trace_vectors();
    let xi_exact: Vec<BigRational> = (0..=half)
        .map(|s| rational(d.eval(s) as i64, 1))
        .collect();

    let (certificate, exact_ratio) = if precision.is_exact_for(n) {
        let cert = phi_epsilon_exact(&xi_exact, &scaled, &exact_from_f64(eps)?)?;
        let ratio = cert.exact_value.clone();
        (cert, ratio)
    } else {
        let xi: Vec<f64> = xi_exact.iter().map(to_f64).collect();
        let trace: Vec<Vec<f64>> = scaled.iter().map(|v| v.iter().map(to_f64).collect()).collect();
        (phi_epsilon(&xi, &trace, eps)?, None)
    };
    let ratio = certificate.value;
    let n_f = ToPrimitive::to_f64(&size).unwrap_or(f64::INFINITY);
    Ok(TraceLowerBound {
        n,
        k,
        eps,
        phi: ratio * n_f,
        ratio,
        exact_ratio,
        certificate,
    })
}

/// `max(0, log2(phi^{1/4} / N))`: the constant-free communication lower bound.
pub fn qcc_lower_bound(n: usize, k: usize, d: &SymmetricPredicate, precision: Precision) -> Result<f64> {
    let tb = trace_lower_bound(n, k, d, DEFAULT_EPS, precision)?;
    if tb.ratio <= 0.0 {
        return Ok(0.0);
    }
    Ok(tb.log2_ratio().max(0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    /// `D|_{floor(k/2)}` as a bitstring.
    pub restricted: String,
    pub approx_degree: usize,
    pub t0: usize,
    pub phi: f64,
    #[serde(rename = "log2_phi_over_N")]
    pub log2_phi_over_n: f64,
    pub lower_bound: f64,
    pub certificate: PhiCertificate,
    pub t0_error: f64,
    pub checks: Vec<Check>,
}

/// Lower-bound chain for `f_{n,k,D}` with a jump of `D` at `l`.
///
/// Computes `t0 = deg~(D|_{k/2}) - 1` and `C = phi^eps(D|_{k/2}, Trace)` and
/// checks the two constant-free facts linking them: the best degree-`t0`
/// polynomial misses `D|_{k/2}` by more than 1/3, while the certificate's
/// point of `Conv_C` is within `eps` of it.
pub fn chain_report(
    n: usize,
    k: usize,
    d: &SymmetricPredicate,
    l: usize,
    eps: f64,
    precision: Precision,
) -> Result<BoundReport> {
    if 4 * k > n {
        return Err(Error::Precondition(format!("need k <= n/4, got n = {n}, k = {k}")));
    }
    if l == 0 || 4 * l > k {
        return Err(Error::Precondition(format!("need 1 <= l <= k/4, got l = {l}, k = {k}")));
    }
    if d.n() < k {
        return Err(Error::Precondition(format!(
            "predicate on {{0..{}}} is too short for k = {k}",
            d.n()
        )));
    }
    if d.eval(l) == d.eval(l - 1) {
        return Err(Error::Precondition(format!("D does not change at l = {l}")));
    }
    let d = d.restrict(k)?;
    let restricted = d.restrict(k / 2)?;
    let degree = approx_degree(&restricted, precision)?;
    // restricted is nonconstant (its jump sits at l <= k/4), so degree >= 1
    let t0 = degree - 1;
    let below = best_poly_approx(&restricted, t0, precision)?;
    let tb = trace_lower_bound(n, k, &d, eps, precision)?;

    let mut checks = Vec::new();
    let misses = match &below.exact_error {
        Some(e) => *e > one_third(),
        None => below.error > 1.0 / 3.0 + FLOAT_TOLERANCE,
    };
    checks.push(Check::new(
        "t0_below_third",
        misses,
        format!("best degree-{t0} error {:.6} > 1/3", below.error),
    ));
    let resid = tb.certificate.residual_linf();
    let resid_ok = match (&tb.certificate.exact_coefficients, tb.exact_ratio.is_some()) {
        (Some(_), true) => resid <= eps,
        _ => resid <= eps + 1e-9,
    };
    checks.push(Check::new(
        "conv_point_within_eps",
        resid_ok,
        format!("rho_inf(D|k/2, Conv_C) = {resid:.6} <= {eps}"),
    ));
    let l1 = tb.certificate.l1_coefficients();
    checks.push(Check::new(
        "certificate_weight",
        (l1 - tb.ratio).abs() <= 1e-9 * tb.ratio.max(1.0),
        format!("sum |a_t| = {l1:.9} vs C/N = {:.9}", tb.ratio),
    ));

    let log2 = if tb.ratio > 0.0 { tb.log2_ratio() } else { f64::NEG_INFINITY };
    Ok(BoundReport {
        n,
        k,
        l,
        restricted: restricted.to_string(),
        approx_degree: degree,
        t0,
        phi: tb.phi,
        log2_phi_over_n: log2,
        lower_bound: log2.max(0.0),
        certificate: tb.certificate,
        t0_error: below.error,
        checks,
    })
}
