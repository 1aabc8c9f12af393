//! Brute-force check of the Johnson eigenvalue formula: simultaneous
//! diagonalisation of all `J_{n,k,s}` through one random combination.
//!
//! Eigenspaces are labelled intrinsically, without the formula: `E_t` is the
//! block on which `W_t` (the inclusion map from k-subsets onto t-subsets) is
//! first nonzero, since `E_0 + ... + E_t` is the row space of `W_t`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::InstanceFamily;
use crate::linalg::symmetric_eigen;
use crate::matrix::DenseMatrix;

pub const ORACLE_BUDGET: usize = 1000;
const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone)]
pub struct EigenspaceOracle {
    pub n: usize,
    pub k: usize,
    /// `dim E_t` for `t = 0..=k`.
    pub multiplicities: Vec<usize>,
    /// Orthonormal columns, grouped by block `E_0, E_1, ...`.
    pub basis: DenseMatrix,
    /// `block_eigenvalues[s][t]`: measured eigenvalue of `J_{n,k,s}` on `E_t`.
    pub block_eigenvalues: Vec<Vec<f64>>,
    /// Largest `||J_s u - lambda u||` over basis vectors `u` and all `s`;
    /// bounds every off-diagonal entry of `basis^T J_s basis`.
    pub diagonal_residual: f64,
}

pub fn eigenspace_oracle(n: usize, k: usize, seed: u64) -> Result<EigenspaceOracle> {
    if 2 * k > n {
        return Err(Error::Precondition(format!(
            "Johnson scheme needs k <= n/2, got n = {n}, k = {k}"
        )));
    }
    let fam = InstanceFamily::new(n, k, ORACLE_BUDGET)?;
    let size = fam.len();
    let table = fam.intersection_table();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<f64> = (0..=k)
            .map(|_| {
                let p: i32 = rng.random_range(1..=1000);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                sign * p as f64 / 997.0
            })
            .collect();
        let combo = DenseMatrix::from_fn(size, size, |i, j| coeffs[table[i * size + j] as usize]);
        let eig = symmetric_eigen(&combo)?;
        let Some(clusters) = cluster(&eig.values, k + 1) else {
            continue;
        };

        let mut labelled: Vec<Option<Vec<usize>>> = vec![None; k + 1];
        for members in clusters {
            let probe: Vec<f64> = (0..size).map(|i| eig.vectors[(i, members[0])]).collect();
            let t = block_label(&fam, &probe)?;
            if labelled[t].replace(members).is_some() {
                return Err(Error::Oracle(format!("two eigenspaces labelled t = {t}")));
            }
        }
        let blocks: Vec<Vec<usize>> = labelled
            .into_iter()
            .map(|b| b.ok_or_else(|| Error::Oracle("missing eigenspace label".into())))
            .collect::<Result<_>>()?;

        let order: Vec<usize> = blocks.iter().flatten().copied().collect();
        let basis = DenseMatrix::from_fn(size, size, |i, j| eig.vectors[(i, order[j])]);
        let (block_eigenvalues, diagonal_residual) = measure_blocks(&table, size, k, &basis, &blocks);
        return Ok(EigenspaceOracle {
            n,
            k,
            multiplicities: blocks.iter().map(Vec::len).collect(),
            basis,
            block_eigenvalues,
            diagonal_residual,
        });
    }
    Err(Error::ClusterCollision(MAX_ATTEMPTS))
}

/// Groups sorted eigenvalues into exactly `expected` well-separated clusters.
fn cluster(values: &[f64], expected: usize) -> Option<Vec<Vec<usize>>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let merge = 1e-9 * scale;
    let separate = 1e-6 * scale;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, w) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if w - values[*c.last().unwrap()] <= merge => c.push(i),
            Some(c) if w - values[*c.last().unwrap()] < separate => return None,
            _ => clusters.push(vec![i]),
        }
    }
    (clusters.len() == expected).then_some(clusters)
}

/// Smallest `t` with `W_t v != 0`.
fn block_label(fam: &InstanceFamily, v: &[f64]) -> Result<usize> {
    let k = fam.k();
    for t in 0..=k {
        let mut image: HashMap<u64, f64> = HashMap::new();
        for (x, &vx) in fam.members().iter().zip(v) {
            for_each_submask(x.0, t, |sub| *image.entry(sub).or_insert(0.0) += vx);
        }
        let norm = image.values().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return Ok(t);
        }
    }
    Err(Error::Oracle("eigenvector annihilated by every inclusion map".into()))
}

fn for_each_submask(mask: u64, size: usize, mut f: impl FnMut(u64)) {
    let bits: Vec<u64> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| 1u64 << i).collect();
    fn rec(bits: &[u64], start: usize, left: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=bits.len() - left {
            rec(bits, i + 1, left - 1, acc | bits[i], f);
        }
    }
    if size <= bits.len() {
        rec(&bits, 0, size, 0, &mut f);
    }
}

fn measure_blocks(
    table: &[u8],
    size: usize,
    k: usize,
    basis: &DenseMatrix,
    blocks: &[Vec<usize>],
) -> (Vec<Vec<f64>>, f64) {
    let mut eigen = vec![vec![0.0; k + 1]; k + 1];
    let mut residual = 0.0f64;
    let mut col = 0;
    for (t, block) in blocks.iter().enumerate() {
        let mut sums = vec![0.0; k + 1];
        let mut images = Vec::with_capacity(block.len());
        for _ in block {
            let u: Vec<f64> = (0..size).map(|i| basis[(i, col)]).collect();
            col += 1;
            // (J_s u)_x for every s in one pass over the intersection table
            let mut js_u = vec![vec![0.0; size]; k + 1];
            for x in 0..size {
                let row = &table[x * size..(x + 1) * size];
                for (y, &s) in row.iter().enumerate() {
                    js_u[s as usize][x] += u[y];
                }
            }
            for s in 0..=k {
                sums[s] += u.iter().zip(&js_u[s]).map(|(a, b)| a * b).sum::<f64>();
            }
            images.push((u, js_u));
        }
        for s in 0..=k {
            eigen[s][t] = sums[s] / block.len() as f64;
        }
        for (u, js_u) in &images {
            for s in 0..=k {
                let r = js_u[s]
                    .iter()
                    .zip(u)
                    .map(|(a, b)| (a - eigen[s][t] * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                residual = residual.max(r);
            }
        }
    }
    (eigen, residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kneser_n4_k2() {
        let o = eigenspace_oracle(4, 2, 1).unwrap();
        assert_eq!(o.multiplicities, vec![1, 3, 2]);
        let want = [1.0, -1.0, 1.0];
        for (got, w) in o.block_eigenvalues[0].iter().zip(want) {
            assert!((got - w).abs() < 1e-10);
        }
        assert!(o.diagonal_residual < 1e-10);
    }

    #[test]
    fn dimensions_add_up() {
        let o = eigenspace_oracle(5, 2, 7).unwrap();
        assert_eq!(o.multiplicities.iter().sum::<usize>(), 10);
        assert!(eigenspace_oracle(5, 3, 7).is_err());
    }

    #[test]
    fn submasks_enumerated() {
        let mut seen = Vec::new();
        for_each_submask(0b1011, 2, |m| seen.push(m));
        seen.sort();
        assert_eq!(seen, vec![0b0011, 0b1001, 0b1010]);
        let mut empty = Vec::new();
        for_each_submask(0b1, 0, |m| empty.push(m));
        assert_eq!(empty, vec![0]);
    }
}
