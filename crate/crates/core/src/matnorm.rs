//! Unitarily invariant norms (operator, Frobenius, trace), entrywise norms,
//! and an upper estimate of the eps-approximate trace norm.

use crate::error::{Error, Result};
use crate::linalg::{svd, symmetric_eigen};
use crate::matrix::DenseMatrix;

/// Singular values, nonincreasing. Exactly symmetric inputs go through the
/// symmetric eigensolver (`sigma = |lambda|`), everything else through Jacobi.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let mut s = if a.is_symmetric(0.0) {
        symmetric_eigen(a)?.values.into_iter().map(f64::abs).collect()
    } else {
        svd(a)?.singular_values
    };
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn operator_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn frobenius(a: &DenseMatrix) -> f64 {
    a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn trace_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

pub fn l1(a: &DenseMatrix) -> f64 {
    a.l1()
}

pub fn linf(a: &DenseMatrix) -> f64 {
    a.linf()
}

pub fn inner(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    a.inner(b)
}

/// Singular value soft-thresholding: shrinks every singular value by `tau`.
pub fn soft_threshold(a: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    let (m, n) = a.shape();
    if a.is_symmetric(0.0) {
        let eig = symmetric_eigen(a)?;
        let shrunk: Vec<f64> = eig
            .values
            .iter()
            .map(|&l| l.signum() * (l.abs() - tau).max(0.0))
            .collect();
        let v = &eig.vectors;
        let keep: Vec<usize> = (0..n).filter(|&t| shrunk[t] != 0.0).collect();
        let mut out = DenseMatrix::from_fn(m, n, |i, j| {
            keep.iter().map(|&t| v[(i, t)] * shrunk[t] * v[(j, t)]).sum()
        });
        symmetrize(&mut out);
        return Ok(out);
    }
    let s = svd(a)?;
    let keep: Vec<(usize, f64)> = s
        .singular_values
        .iter()
        .map(|&x| (x - tau).max(0.0))
        .enumerate()
        .filter(|&(_, x)| x > 0.0)
        .collect();
    Ok(DenseMatrix::from_fn(m, n, |i, j| {
        keep.iter().map(|&(t, x)| s.left[(i, t)] * x * s.right[(j, t)]).sum()
    }))
}

fn symmetrize(a: &mut DenseMatrix) {
    for i in 0..a.rows() {
        for j in 0..i {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
}

pub const APPROX_MAX_ITER: usize = 500;
pub const APPROX_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ApproxTraceNorm {
    /// `trace_norm(witness)`, an upper bound on the eps-approximate trace norm.
    pub value: f64,
    /// Satisfies `linf(M - witness) <= eps` exactly in floating point.
    pub witness: DenseMatrix,
    pub iterations: usize,
}

/// Upper estimate of `min { |||P|||_tr : linf(M - P) <= eps }`.
///
/// Alternates singular value soft-thresholding with projection onto the
/// entrywise box of radius `eps` around `M` (ADMM splitting). Every projected
/// iterate is feasible, and the best one seen is returned, so the value is a
/// valid upper bound whether or not the iteration reached the optimum.
pub fn approx_trace_norm_upper(m: &DenseMatrix, eps: f64) -> Result<ApproxTraceNorm> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Precondition(format!("eps must be finite and >= 0, got {eps}")));
    }
    let (rows, cols) = m.shape();
    let radius = m.linf();
    if eps == 0.0 {
        return Ok(ApproxTraceNorm {
            value: trace_norm(m)?,
            witness: m.clone(),
            iterations: 0,
        });
    }
    if eps >= radius {
        return Ok(ApproxTraceNorm {
            value: 0.0,
            witness: DenseMatrix::zeros(rows, cols),
            iterations: 0,
        });
    }

    // shrinking M towards zero is always feasible
    let shrink = project_box(&m.scale(1.0 - eps / radius), m, eps);
    let mut best_value = trace_norm(&shrink)?;
    let mut best = shrink.clone();

    let tau = eps.max(1e-3 * radius);
    let mut z = shrink;
    let mut dual = DenseMatrix::zeros(rows, cols);
    let mut last = best_value;
    let mut iterations = 0;
    for it in 1..=APPROX_MAX_ITER {
        iterations = it;
        let p = soft_threshold(&z.sub(&dual)?, tau)?;
        let p_plus = p.add(&dual)?;
        z = project_box(&p_plus, m, eps);
        dual = p_plus.sub(&z)?;
        let value = trace_norm(&z)?;
        if value < best_value {
            best_value = value;
            best = z.clone();
        }
        if (last - value).abs() <= APPROX_REL_TOL * value.max(1e-300) {
            break;
        }
        last = value;
    }
    debug_assert!(best.sub(m).map(|d| d.linf() <= eps).unwrap_or(false));
    Ok(ApproxTraceNorm {
        value: best_value,
        witness: best,
        iterations,
    })
}

/// Clamps `a` entrywise into `[m - eps, m + eps]`, guarding the rounding of
/// the box edges so that `|m - result| <= eps` holds in floating point.
fn project_box(a: &DenseMatrix, m: &DenseMatrix, eps: f64) -> DenseMatrix {
    let mut out = a.clone();
    for (o, &c) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
        let mut lo = c - eps;
        while c - lo > eps {
            lo = lo.next_up();
        }
        let mut hi = c + eps;
        while hi - c > eps {
            hi = hi.next_down();
        }
        *o = o.clamp(lo, hi);
    }
    out
}
