//! Dense simulator for `c`-qubit communication protocols.
//!
//! Alice holds `H_A = W_A ⊗ X ⊗ E`, Bob holds `H_B = E ⊗ Y ⊗ W_B`, and the
//! one-qubit channel `C` sits between them. Alice applies the odd rounds to
//! `H_A ⊗ C`, Bob the even rounds to `C ⊗ H_B`; the protocol accepts when the
//! channel reads `|1>` at the end.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matnorm;
use crate::matrix::{DenseMatrix, Matrix};

pub type ComplexMatrix = Matrix<Complex64>;

/// Cap on `dim(H_A) * 2 * dim(H_B)`.
pub const MAX_STATE_DIM: usize = 1 << 14;
/// Cap on the total number of entries across all Kremer operators.
pub const KREMER_BUDGET: usize = 1 << 22;
pub const UNITARY_TOLERANCE: f64 = 1e-10;
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProtocolDims {
    pub inputs_x: usize,
    pub inputs_y: usize,
    pub work_a: usize,
    pub work_b: usize,
    /// `|E|`; 1 means no prior entanglement.
    pub entangled: usize,
}

impl ProtocolDims {
    pub fn new(inputs: usize, work: usize, entangled: usize) -> Self {
        Self {
            inputs_x: inputs,
            inputs_y: inputs,
            work_a: work,
            work_b: work,
            entangled,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.work_a * self.inputs_x * self.entangled
    }

    pub fn dim_b(&self) -> usize {
        self.entangled * self.inputs_y * self.work_b
    }

    pub fn state_dim(&self) -> usize {
        self.dim_a().saturating_mul(2).saturating_mul(self.dim_b())
    }

    fn validate(&self) -> Result<()> {
        let d = self;
        if d.inputs_x == 0 || d.inputs_y == 0 || d.work_a == 0 || d.work_b == 0 || d.entangled == 0 {
            return Err(Error::Precondition("all register sizes must be positive".into()));
        }
        let needed = d.state_dim();
        if needed > MAX_STATE_DIM {
            return Err(Error::Budget {
                what: "protocol state",
                needed,
                budget: MAX_STATE_DIM,
            });
        }
        Ok(())
    }

    fn alice_index(&self, a: usize, x: usize, e: usize) -> usize {
        (a * self.inputs_x + x) * self.entangled + e
    }

    fn bob_index(&self, e: usize, y: usize, b: usize) -> usize {
        (e * self.inputs_y + y) * self.work_b + b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// `lambda_e = |E|^{-1/2}`.
    Uniform,
    /// A seeded random unit vector.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    dims: ProtocolDims,
    weights: Vec<Complex64>,
    unitaries: Vec<ComplexMatrix>,
}

fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for r in 0..n {
                acc += u[(r, i)].conj() * u[(r, j)];
            }
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

impl ProtocolSpec {
    pub fn new(dims: ProtocolDims, weights: Vec<Complex64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        dims.validate()?;
        if weights.len() != dims.entangled {
            return Err(Error::Shape(format!(
                "{} entanglement weights for |E| = {}",
                weights.len(),
                dims.entangled
            )));
        }
        let norm: f64 = weights.iter().map(|w| w.norm_sqr()).sum();
        if (norm - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::Precondition(format!(
                "entanglement weights have squared norm {norm}"
            )));
        }
        if unitaries.is_empty() {
            return Err(Error::Precondition("a protocol needs at least one round".into()));
        }
        for (i, u) in unitaries.iter().enumerate() {
            let side = if i % 2 == 0 { dims.dim_a() } else { dims.dim_b() };
            if u.shape() != (2 * side, 2 * side) {
                return Err(Error::Shape(format!(
                    "round {} unitary is {:?}, expected {}x{}",
                    i + 1,
                    u.shape(),
                    2 * side,
                    2 * side
                )));
            }
            let defect = unitarity_defect(u);
            if defect > UNITARY_TOLERANCE {
                return Err(Error::Precondition(format!(
                    "round {} operator is not unitary (defect {defect:.3e})",
                    i + 1
                )));
            }
        }
        Ok(Self {
            dims,
            weights,
            unitaries,
        })
    }

    pub fn uniform_weights(entangled: usize) -> Vec<Complex64> {
        let w = Complex64::new((entangled as f64).recip().sqrt(), 0.0);
        vec![w; entangled]
    }

    /// Every round is the identity; the channel never leaves `|0>`.
    pub fn identity(dims: ProtocolDims, rounds: usize) -> Result<Self> {
        let unitaries = (0..rounds)
            .map(|i| {
                let side = if i % 2 == 0 { dims.dim_a() } else { dims.dim_b() };
                identity(2 * side)
            })
            .collect();
        Self::new(dims, Self::uniform_weights(dims.entangled), unitaries)
    }

    /// One round in which Alice flips the channel qubit.
    pub fn channel_flip(dims: ProtocolDims) -> Result<Self> {
        let d = 2 * dims.dim_a();
        let flip = ComplexMatrix::from_fn(d, d, |i, j| if i ^ 1 == j { ONE } else { ZERO });
        Self::new(dims, Self::uniform_weights(dims.entangled), vec![flip])
    }

    pub fn dims(&self) -> ProtocolDims {
        self.dims
    }

    pub fn rounds(&self) -> usize {
        self.unitaries.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// `Input(x, y) = sum_e lambda_e |0, x, e> |0> |e, y, 0>`.
    pub fn input_state(&self, x: usize, y: usize) -> Result<Vec<Complex64>> {
        let d = &self.dims;
        if x >= d.inputs_x || y >= d.inputs_y {
            return Err(Error::Precondition(format!(
                "input ({x}, {y}) outside {}x{}",
                d.inputs_x, d.inputs_y
            )));
        }
        let mut state = vec![ZERO; d.state_dim()];
        for (e, &w) in self.weights.iter().enumerate() {
            let a = d.alice_index(0, x, e);
            let b = d.bob_index(e, y, 0);
            state[a * 2 * d.dim_b() + b] = w;
        }
        Ok(state)
    }

    /// Applies all rounds in order to `state`.
    pub fn evolve(&self, state: &mut [Complex64]) -> Result<()> {
        let (da, db) = (self.dims.dim_a(), self.dims.dim_b());
        if state.len() != da * 2 * db {
            return Err(Error::Shape(format!(
                "state of length {} for dimension {}",
                state.len(),
                da * 2 * db
            )));
        }
        let mut buf = vec![ZERO; 2 * da.max(db)];
        for (i, u) in self.unitaries.iter().enumerate() {
            if i % 2 == 0 {
                // Alice's index (a*2 + ch) is strided by dim_B
                for b in 0..db {
                    let src: Vec<Complex64> = (0..2 * da).map(|j| state[j * db + b]).collect();
                    apply(u, &src, &mut buf[..2 * da]);
                    for j in 0..2 * da {
                        state[j * db + b] = buf[j];
                    }
                }
            } else {
                for chunk in state.chunks_mut(2 * db) {
                    apply(u, chunk, &mut buf[..2 * db]);
                    chunk.copy_from_slice(&buf[..2 * db]);
                }
            }
        }
        Ok(())
    }

    /// Squared norm of the final state's projection onto channel `|1>`.
    pub fn accept_probability(&self, state: &[Complex64]) -> f64 {
        let db = self.dims.dim_b();
        state
            .chunks(db)
            .skip(1)
            .step_by(2)
            .flatten()
            .map(|z| z.norm_sqr())
            .sum()
    }
}

fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

fn apply(u: &ComplexMatrix, v: &[Complex64], out: &mut [Complex64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = u.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// Probability that the protocol accepts on `(x, y)`.
pub fn run_protocol(spec: &ProtocolSpec, x: usize, y: usize) -> Result<f64> {
    let mut state = spec.input_state(x, y)?;
    spec.evolve(&mut state)?;
    Ok(spec.accept_probability(&state))
}

/// `P[x][y] = run_protocol(spec, x, y)`.
pub fn acceptance_matrix(spec: &ProtocolSpec) -> Result<DenseMatrix> {
    let d = spec.dims();
    let mut p = DenseMatrix::zeros(d.inputs_x, d.inputs_y);
    for x in 0..d.inputs_x {
        for y in 0..d.inputs_y {
            p[(x, y)] = run_protocol(spec, x, y)?;
        }
    }
    Ok(p)
}

/// Operators with `U_p |a>|0>|b> = sum_u A_u|a> |u_c> B_u|b>`, indexed by
/// the bit pattern `u` with round `i` stored in bit `i - 1`.
#[derive(Debug, Clone)]
pub struct KremerDecomposition {
    rounds: usize,
    alice: Vec<ComplexMatrix>,
    bob: Vec<ComplexMatrix>,
}

fn bit(u: usize, round: usize) -> usize {
    // round 0 is the fixed initial channel value
    if round == 0 {
        0
    } else {
        (u >> (round - 1)) & 1
    }
}

/// Splits every round by channel value in and out and multiplies the
/// pieces along each path `u`.
pub fn kremer_decompose(spec: &ProtocolSpec) -> Result<KremerDecomposition> {
    let c = spec.rounds();
    let (da, db) = (spec.dims().dim_a(), spec.dims().dim_b());
    let paths = 1usize.checked_shl(c as u32).unwrap_or(usize::MAX);
    let needed = paths.saturating_mul(da * da + db * db);
    if c >= usize::BITS as usize || needed > KREMER_BUDGET {
        return Err(Error::Budget {
            what: "Kremer operators",
            needed,
            budget: KREMER_BUDGET,
        });
    }
    // factor[i][p][q]: channel p in, q out during round i + 1
    let factors: Vec<[[ComplexMatrix; 2]; 2]> = spec
        .unitaries()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let block = |p: usize, q: usize| {
                if i % 2 == 0 {
                    ComplexMatrix::from_fn(da, da, |r, s| u[(r * 2 + q, s * 2 + p)])
                } else {
                    ComplexMatrix::from_fn(db, db, |r, s| u[(q * db + r, p * db + s)])
                }
            };
            [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]]
        })
        .collect();
    let mut alice = Vec::with_capacity(paths);
    let mut bob = Vec::with_capacity(paths);
    for u in 0..paths {
        let mut a = identity(da);
        let mut b = identity(db);
        for (i, f) in factors.iter().enumerate() {
            let piece = &f[bit(u, i)][bit(u, i + 1)];
            if i % 2 == 0 {
                a = piece.matmul(&a)?;
            } else {
                b = piece.matmul(&b)?;
            }
        }
        alice.push(a);
        bob.push(b);
    }
    Ok(KremerDecomposition {
        rounds: c,
        alice,
        bob,
    })
}

/// Spectral norm of a complex matrix through its real embedding
/// `[[Re, -Im], [Im, Re]]`.
pub fn complex_operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let (r, c) = m.shape();
    let real = DenseMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    matnorm::operator_norm(&real)
}

impl KremerDecomposition {
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn paths(&self) -> usize {
        self.alice.len()
    }

    pub fn alice(&self, u: usize) -> &ComplexMatrix {
        &self.alice[u]
    }

    pub fn bob(&self, u: usize) -> &ComplexMatrix {
        &self.bob[u]
    }

    /// Output channel value `u_c` of path `u`.
    pub fn output(&self, u: usize) -> usize {
        bit(u, self.rounds)
    }

    /// Largest `||A_u||` or `||B_u||` over all paths.
    pub fn max_operator_norm(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for m in self.alice.iter().chain(&self.bob) {
            worst = worst.max(complex_operator_norm(m)?);
        }
        Ok(worst)
    }

    /// `sum_u A_u|a> |u_c> B_u|b>` as a state vector.
    pub fn recombine(&self, dims: ProtocolDims, a: usize, b: usize) -> Vec<Complex64> {
        let (da, db) = (dims.dim_a(), dims.dim_b());
        let mut state = vec![ZERO; da * 2 * db];
        for u in 0..self.paths() {
            let ch = self.output(u);
            let (au, bu) = (&self.alice[u], &self.bob[u]);
            for i in 0..da {
                let alpha = au[(i, a)];
                if alpha == ZERO {
                    continue;
                }
                for j in 0..db {
                    state[(i * 2 + ch) * db + j] += alpha * bu[(j, b)];
                }
            }
        }
        state
    }

    /// Largest amplitude error of the reconstruction over all basis pairs `(a, b)`.
    pub fn reconstruction_residual(&self, spec: &ProtocolSpec) -> Result<f64> {
        let dims = spec.dims();
        let (da, db) = (dims.dim_a(), dims.dim_b());
        let mut worst = 0.0f64;
        for a in 0..da {
            for b in 0..db {
                let mut direct = vec![ZERO; da * 2 * db];
                direct[a * 2 * db + b] = ONE;
                spec.evolve(&mut direct)?;
                let rebuilt = self.recombine(dims, a, b);
                for (p, q) in direct.iter().zip(&rebuilt) {
                    worst = worst.max((p - q).norm());
                }
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceBoundReport {
    pub trace_norm: f64,
    /// `N * 4^(c - 1)`.
    pub bound: f64,
    /// `bound - trace_norm`.
    pub margin: f64,
    pub c: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl TraceBoundReport {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Trace norm of the acceptance matrix against `N * 4^(c-1)`.
pub fn verify_trace_bound(spec: &ProtocolSpec) -> Result<TraceBoundReport> {
    let d = spec.dims();
    if d.inputs_x != d.inputs_y {
        return Err(Error::Precondition(format!(
            "trace bound needs |X| = |Y|, got {} and {}",
            d.inputs_x, d.inputs_y
        )));
    }
    let p = acceptance_matrix(spec)?;
    let trace_norm = matnorm::trace_norm(&p)?;
    let c = spec.rounds();
    let bound = d.inputs_x as f64 * 4f64.powi(c as i32 - 1);
    Ok(TraceBoundReport {
        trace_norm,
        bound,
        margin: bound - trace_norm,
        c,
        n: d.inputs_x,
    })
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-distributed unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..dim {
        // two passes keep the columns orthonormal to working precision
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Seeded random protocol with Haar unitaries in every round.
pub fn random_protocol(seed: u64, dims: ProtocolDims, rounds: usize, weights: WeightMode) -> Result<ProtocolSpec> {
    dims.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = match weights {
        WeightMode::Uniform => ProtocolSpec::uniform_weights(dims.entangled),
        WeightMode::Random => {
            let raw: Vec<Complex64> = (0..dims.entangled).map(|_| gaussian(&mut rng)).collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            raw.into_iter().map(|z| z / norm).collect()
        }
    };
    let unitaries = (0..rounds)
        .map(|i| {
            let side = if i % 2 == 0 { dims.dim_a() } else { dims.dim_b() };
            random_unitary(2 * side, &mut rng)
        })
        .collect();
    ProtocolSpec::new(dims, lambda, unitaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron_oracle(spec: &ProtocolSpec, x: usize, y: usize) -> f64 {
        // embed every round into the full space and multiply dense matrices
        let d = spec.dims();
        let (da, db) = (d.dim_a(), d.dim_b());
        let total = da * 2 * db;
        let mut state = spec.input_state(x, y).unwrap();
        for (i, u) in spec.unitaries().iter().enumerate() {
            let full = ComplexMatrix::from_fn(total, total, |r, c| {
                if i % 2 == 0 {
                    if r % db == c % db {
                        u[(r / db, c / db)]
                    } else {
                        ZERO
                    }
                } else if r / (2 * db) == c / (2 * db) {
                    u[(r % (2 * db), c % (2 * db))]
                } else {
                    ZERO
                }
            });
            let col = ComplexMatrix::from_vec(total, 1, state).unwrap();
            state = full.matmul(&col).unwrap().as_slice().to_vec();
        }
        let mut p = 0.0;
        for a in 0..da {
            for b in 0..db {
                p += state[(a * 2 + 1) * db + b].norm_sqr();
            }
        }
        p
    }

    #[test]
    fn flip_accepts_everything() {
        let spec = ProtocolSpec::channel_flip(ProtocolDims::new(3, 2, 2)).unwrap();
        let p = acceptance_matrix(&spec).unwrap();
        assert!(p.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        let rep = verify_trace_bound(&spec).unwrap();
        assert!((rep.trace_norm - 3.0).abs() < 1e-9);
        assert_eq!(rep.bound, 3.0);
    }

    #[test]
    fn identity_rejects_everything() {
        let spec = ProtocolSpec::identity(ProtocolDims::new(3, 1, 2), 3).unwrap();
        assert!(acceptance_matrix(&spec).unwrap().as_slice().iter().all(|&v| v == 0.0));
        assert_eq!(verify_trace_bound(&spec).unwrap().trace_norm, 0.0);
        let k = kremer_decompose(&spec).unwrap();
        for u in 1..k.paths() {
            let zero = |m: &ComplexMatrix| m.as_slice().iter().all(|z| *z == ZERO);
            assert!(zero(k.alice(u)) || zero(k.bob(u)), "path {u}");
        }
    }

    #[test]
    fn flip_decomposition() {
        let spec = ProtocolSpec::channel_flip(ProtocolDims::new(2, 1, 1)).unwrap();
        let k = kremer_decompose(&spec).unwrap();
        assert_eq!(k.alice(1), &identity(2));
        assert_eq!(k.bob(1), &identity(2));
        assert!(k.alice(0).as_slice().iter().all(|z| *z == ZERO));
    }

    #[test]
    fn matches_kronecker_oracle() {
        for (seed, weights) in [(1, WeightMode::Uniform), (2, WeightMode::Random)] {
            let dims = ProtocolDims { inputs_x: 3, inputs_y: 2, work_a: 2, work_b: 1, entangled: 2 };
            let spec = random_protocol(seed, dims, 3, weights).unwrap();
            for x in 0..3 {
                for y in 0..2 {
                    let fast = run_protocol(&spec, x, y).unwrap();
                    assert!((fast - kron_oracle(&spec, x, y)).abs() < 1e-10);
                    assert!((-1e-10..=1.0 + 1e-10).contains(&fast));
                }
            }
        }
    }

    #[test]
    fn random_decomposition_reconstructs() {
        let spec = random_protocol(7, ProtocolDims::new(2, 2, 2), 4, WeightMode::Random).unwrap();
        let k = kremer_decompose(&spec).unwrap();
        assert!(k.reconstruction_residual(&spec).unwrap() < 1e-9);
        assert!(k.max_operator_norm().unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn seeds_are_deterministic() {
        let dims = ProtocolDims::new(2, 1, 2);
        let a = random_protocol(5, dims, 2, WeightMode::Random).unwrap();
        assert_eq!(a, random_protocol(5, dims, 2, WeightMode::Random).unwrap());
        assert_ne!(a, random_protocol(6, dims, 2, WeightMode::Random).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let dims = ProtocolDims::new(2, 1, 1);
        let mut u = identity(4);
        u[(0, 0)] = Complex64::new(1.0 + 1e-6, 0.0);
        assert!(ProtocolSpec::new(dims, vec![ONE], vec![u]).is_err());
        assert!(ProtocolSpec::new(dims, vec![ONE], vec![identity(3)]).is_err());
        assert!(ProtocolSpec::new(dims, vec![Complex64::new(0.9, 0.0)], vec![identity(4)]).is_err());
        assert!(ProtocolSpec::identity(ProtocolDims::new(64, 4, 1), 1).is_err());
    }

    #[test]
    fn complex_norm_of_phase() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| if i == j { Complex64::new(0.0, 2.0) } else { ZERO });
        assert!((complex_operator_norm(&m).unwrap() - 2.0).abs() < 1e-12);
    }
}
