#![allow(dead_code)]

use rand::Rng;
use symcc::DenseMatrix;

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Orthogonal matrix by Gram-Schmidt on random columns (re-orthogonalised once).
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for q in &cols {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    DenseMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random subset of `0..n`, nonempty.
pub fn random_indices(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let pick: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
        if !pick.is_empty() {
            return pick;
        }
    }
}
