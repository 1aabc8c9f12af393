//! Dense decompositions: one-sided Jacobi SVD and a symmetric eigensolver
//! (Householder tridiagonalisation followed by implicit QL).

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub const SVD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `m x p` with orthonormal columns, `p = min(m, n)`.
    pub left: DenseMatrix,
    /// `n x p` with orthonormal columns.
    pub right: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, p) = self.left.shape();
        let n = self.right.rows();
        DenseMatrix::from_fn(m, n, |i, j| {
            (0..p)
                .map(|t| self.left[(i, t)] * self.singular_values[t] * self.right[(j, t)])
                .sum()
        })
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
pub fn svd(a: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose())?;
        return Ok(SvdResult {
            singular_values: t.singular_values,
            left: t.right,
            right: t.left,
        });
    }
    // columns of A and of V, each stored contiguously
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let max_sweeps = 100 * m.max(n).max(1);
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= SVD_TOLERANCE * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Jacobi SVD", max_sweeps));
    }

    let mut order: Vec<(f64, usize)> = w.iter().enumerate().map(|(j, c)| (norm(c), j)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let sigma_max = order.first().map_or(0.0, |o| o.0);
    let negligible = sigma_max * f64::EPSILON * m as f64;

    let mut left_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (slot, &(sigma, j)) in order.iter().enumerate() {
        if sigma > negligible && sigma > 0.0 {
            left_cols.push(w[j].iter().map(|x| x / sigma).collect());
        } else {
            left_cols.push(vec![0.0; m]);
            deficient.push(slot);
        }
    }
    complete_orthonormal(&mut left_cols, &deficient, m);

    Ok(SvdResult {
        singular_values: order.iter().map(|o| o.0).collect(),
        left: DenseMatrix::from_fn(m, n, |i, t| left_cols[t][i]),
        right: DenseMatrix::from_fn(n, n, |i, t| v[order[t].1][i]),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the `deficient` slots with unit vectors orthogonal to every other column.
fn complete_orthonormal(cols: &mut [Vec<f64>], deficient: &[usize], m: usize) {
    let mut candidate = 0;
    for &slot in deficient {
        while candidate < m {
            let mut e = vec![0.0; m];
            e[candidate] = 1.0;
            candidate += 1;
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for (t, c) in cols.iter().enumerate() {
                    if t == slot || c.iter().all(|&x| x == 0.0) {
                        continue;
                    }
                    let proj = dot(&e, c);
                    e.iter_mut().zip(c).for_each(|(x, y)| *x -= proj * y);
                }
            }
            let len = norm(&e);
            if len > 1e-8 {
                cols[slot] = e.iter().map(|x| x / len).collect();
                break;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: DenseMatrix,
}

/// Eigendecomposition of a real symmetric matrix (only the lower triangle is read).
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::Shape(format!("eigen of non-square {:?}", a.shape())));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: DenseMatrix::zeros(0, 0),
        });
    }
    let mut v: Vec<f64> = DenseMatrix::from_fn(n, n, |i, j| {
        if j <= i {
            a[(i, j)]
        } else {
            a[(j, i)]
        }
    })
    .as_slice()
    .to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    // rows of z are the (eventual) eigenvectors, which keeps QL rotations contiguous
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            z[i * n + k] = v[k * n + i];
        }
    }
    implicit_ql(n, &mut z, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| d[i]).collect(),
        vectors: DenseMatrix::from_fn(n, n, |k, j| z[order[j] * n + k]),
    })
}

fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |k: usize, j: usize| k * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let (f, g) = (d[j], e[j]);
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn implicit_ql(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    const MAX_ITER: usize = 100;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_ITER {
                    return Err(Error::NoConvergence("symmetric QL", MAX_ITER));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for x in d[l + 2..n].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(m: usize, n: usize, seed: u64) -> DenseMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        DenseMatrix::from_fn(m, n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    fn assert_orthonormal_columns(q: &DenseMatrix, tol: f64) {
        let qtq = q.transpose().matmul(q).unwrap();
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(q.cols())).unwrap() < tol);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        for (m, n, seed) in [(5, 4, 1), (4, 5, 2), (7, 7, 3), (1, 6, 4), (9, 2, 5)] {
            let a = pseudo_random(m, n, seed);
            let s = svd(&a).unwrap();
            assert!(s.reconstruct().max_abs_diff(&a).unwrap() < 1e-12);
            assert_orthonormal_columns(&s.left, 1e-12);
            assert_orthonormal_columns(&s.right, 1e-12);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_rank_deficient_still_orthonormal() {
        let ones = DenseMatrix::filled(4, 3, 1.0);
        let s = svd(&ones).unwrap();
        assert!((s.singular_values[0] - 12f64.sqrt()).abs() < 1e-12);
        assert!(s.singular_values[1..].iter().all(|&x| x < 1e-12));
        assert_orthonormal_columns(&s.left, 1e-10);
        let zero = svd(&DenseMatrix::zeros(3, 3)).unwrap();
        assert_orthonormal_columns(&zero.left, 1e-12);
    }

    #[test]
    fn eigen_diagonalizes() {
        for n in [1, 2, 5, 30] {
            let b = pseudo_random(n, n, n as u64);
            let a = b.add(&b.transpose()).unwrap();
            let eig = symmetric_eigen(&a).unwrap();
            assert_orthonormal_columns(&eig.vectors, 1e-12);
            let d = eig.vectors.transpose().matmul(&a).unwrap().matmul(&eig.vectors).unwrap();
            let want = DenseMatrix::from_fn(n, n, |i, j| if i == j { eig.values[i] } else { 0.0 });
            assert!(d.max_abs_diff(&want).unwrap() < 1e-11);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigen_of_degenerate_spectrum() {
        // all-ones 4x4: eigenvalues 0, 0, 0, 4
        let eig = symmetric_eigen(&DenseMatrix::filled(4, 4, 1.0)).unwrap();
        let want = [0.0, 0.0, 0.0, 4.0];
        for (got, want) in eig.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(symmetric_eigen(&DenseMatrix::zeros(2, 3)).is_err());
    }
}
