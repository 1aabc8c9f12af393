//! Cross-check suite: each check compares a computed quantity against an
//! independent route to the same value (brute-force diagonalisation, exact
//! matrices, simulation, sampling).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{
    approx_degree, best_poly_approx, phi_epsilon_exact, qcc_lower_bound, trace_lower_bound,
    Precision,
};
use crate::check::{all_passed, Check};
use crate::combinat::binomial_big;
use crate::error::Result;
use crate::family::InstanceFamily;
use crate::johnson::{
    build_test, decay_holds, eigenspace_oracle, hahn_eigenvalue, intersection_matrix,
    normalized_eigenvalue, test_matrix_exact,
};
use crate::linalg::symmetric_eigen;
use crate::matnorm::{approx_trace_norm_upper, trace_norm};
use crate::matrix::DenseMatrix;
use crate::predicate::{comm_matrix, SymmetricPredicate};
use crate::protosim::{kremer_decompose, random_protocol, verify_trace_bound, ProtocolDims, WeightMode};

const EXACT_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub budget: Budget,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn run(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check::new(name, passed, detail),
        Err(e) => Check::new(name, false, format!("error: {e}")),
    }
}

fn big_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Knuth's eigenvalues against a brute-force simultaneous diagonalisation,
/// for every `n <= max_n`, `k <= n/2`.
pub fn hahn_vs_oracle(max_n: usize, seed: u64) -> Check {
    run("hahn_vs_oracle", || {
        let mut worst = 0.0f64;
        let mut cases = 0;
        for n in 1..=max_n {
            for k in 0..=n / 2 {
                let o = eigenspace_oracle(n, k, seed ^ (n * 64 + k) as u64)?;
                for t in 0..=k {
                    let dim = binomial_big(n as i64, t as i64) - binomial_big(n as i64, t as i64 - 1);
                    if BigInt::from(o.multiplicities[t]) != dim {
                        return Ok((false, format!("dim E_{t} = {} at n={n}, k={k}", o.multiplicities[t])));
                    }
                    for s in 0..=k {
                        let want = big_f64(&hahn_eigenvalue(n, k, s, t)?);
                        worst = worst.max((o.block_eigenvalues[s][t] - want).abs());
                    }
                }
                cases += 1;
            }
        }
        Ok((worst <= 1e-8, format!("{cases} schemes, max deviation {worst:.3e}")))
    })
}

/// `J_{4,2,0}` spectrum and `J_{n,k,k} = I`.
pub fn spot_values() -> Check {
    run("spot_values", || {
        let eig = symmetric_eigen(&intersection_matrix(4, 2, 0, EXACT_BUDGET)?)?;
        let want = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];
        let spectrum_ok = eig.values.iter().zip(want).all(|(v, w)| (v - w).abs() < 1e-12);
        let row: Vec<BigInt> = (0..=2).map(|t| hahn_eigenvalue(4, 2, 0, t)).collect::<Result<_>>()?;
        let row_ok = row == [1, -1, 1].map(BigInt::from);
        let mult_ok = eigenspace_oracle(4, 2, 1)?.multiplicities == [1, 3, 2];
        let mut diag_ok = true;
        for n in 1..=10 {
            for k in 0..=n / 2 {
                for t in 0..=k {
                    diag_ok &= hahn_eigenvalue(n, k, k, t)?.is_one();
                }
            }
        }
        Ok((
            spectrum_ok && row_ok && mult_ok && diag_ok,
            format!("J_4,2,0 spectrum {spectrum_ok}, row (1,-1,1) {row_ok}, dims (1,3,2) {mult_ok}, J_n,k,k {diag_ok}"),
        ))
    })
}

/// `|lambda_st| <= N^-1 (s/k + (k-s)/(n-k))^t` exactly.
pub fn decay(max_n: usize) -> Check {
    run("decay_bound", || {
        let mut cases = 0;
        for n in 4..=max_n {
            for k in 1..=n / 4 {
                for s in 0..=k / 2 {
                    for t in 0..=k {
                        if !decay_holds(n, k, s, t)? {
                            return Ok((false, format!("fails at n={n}, k={k}, s={s}, t={t}")));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok((true, format!("{cases} exact comparisons")))
    })
}

/// `s -> lambda_st` is a polynomial of degree `t`: its `(t+1)`-th finite
/// difference vanishes.
pub fn polynomiality(max_n: usize) -> Check {
    run("polynomiality", || {
        let mut cases = 0;
        for n in 1..=max_n {
            for k in 1..=n / 2 {
                for t in 0..k {
                    let mut diff: Vec<BigRational> = (0..=k)
                        .map(|s| normalized_eigenvalue(n, k, s, t))
                        .collect::<Result<_>>()?;
                    for _ in 0..=t {
                        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
                    }
                    if !diff.iter().all(Zero::is_zero) {
                        return Ok((false, format!("nonzero difference at n={n}, k={k}, t={t}")));
                    }
                    cases += 1;
                }
            }
        }
        Ok((true, format!("{cases} (n,k,t) triples")))
    })
}

/// `l1(mu_s) = 1` and `<M_f, mu_s> = D(s)` for every predicate, on exact matrices.
pub fn discrepancy_identities(max_n: usize) -> Check {
    run("discrepancy_identities", || {
        let mut cases = 0;
        for n in 1..=max_n {
            for k in 0..=n / 2 {
                let fam = InstanceFamily::new(n, k, EXACT_BUDGET)?;
                let mus: Vec<_> = (0..=k)
                    .map(|s| test_matrix_exact(n, k, s, EXACT_BUDGET))
                    .collect::<Result<_>>()?;
                for (s, mu) in mus.iter().enumerate() {
                    if mu.l1() != BigRational::one() {
                        return Ok((false, format!("l1(mu_{s}) != 1 at n={n}, k={k}")));
                    }
                }
                for bits in 0u32..1 << (k + 1) {
                    let d = SymmetricPredicate::from_fn(k, |s| bits >> s & 1 == 1);
                    let m = comm_matrix(&fam, &d)?;
                    for (s, mu) in mus.iter().enumerate() {
                        let mut acc = BigRational::zero();
                        for (w, &f) in mu.as_slice().iter().zip(m.as_slice()) {
                            if f != 0.0 && !w.is_zero() {
                                acc += w;
                            }
                        }
                        let want = if d.eval(s) { BigRational::one() } else { BigRational::zero() };
                        if acc != want {
                            return Ok((false, format!("<M, mu_{s}> = {acc} for D={d}, n={n}, k={k}")));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok((true, format!("{cases} exact scalar products")))
    })
}

/// `deg~(parity_n) = n` and `deg~(constant) = 0` by exact LP.
pub fn parity_degree(max_n: usize) -> Check {
    run("parity_degree", || {
        let mut got = Vec::new();
        for n in 1..=max_n {
            got.push(approx_degree(&SymmetricPredicate::parity(n), Precision::Exact)?);
        }
        let parity_ok = got.iter().enumerate().all(|(i, &d)| d == i + 1);
        let mut const_ok = true;
        for n in 0..=max_n {
            for v in [false, true] {
                const_ok &= approx_degree(&SymmetricPredicate::constant(n, v), Precision::Exact)? == 0;
            }
        }
        Ok((parity_ok && const_ok, format!("parity degrees {got:?}, constants zero {const_ok}")))
    })
}

fn random_predicate(rng: &mut ChaCha8Rng, n: usize) -> SymmetricPredicate {
    let values = (0..=n).map(|_| rng.random_bool(0.5)).collect();
    SymmetricPredicate::new(values).expect("nonempty value table")
}

/// Best error is nonincreasing in `d` and `approx_degree` is the first `d`
/// at or below 1/3.
pub fn error_monotone(count: usize, seed: u64) -> Check {
    run("error_monotone", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let n = rng.random_range(1..=12);
            let d = random_predicate(&mut rng, n);
            let errs: Vec<BigRational> = (0..=n)
                .map(|deg| best_poly_approx(&d, deg, Precision::Exact).map(|p| p.exact_error.expect("exact")))
                .collect::<Result<_>>()?;
            if errs.windows(2).any(|w| w[1] > w[0]) {
                return Ok((false, format!("error increases for D={d}")));
            }
            let third = BigRational::new(1.into(), 3.into());
            let first = errs.iter().position(|e| *e <= third).expect("degree n interpolates");
            if approx_degree(&d, Precision::Exact)? != first {
                return Ok((false, format!("approx_degree is not the first crossing for D={d}")));
            }
        }
        Ok((true, format!("{count} random predicates")))
    })
}

/// `deg~(thr_l) / sqrt(n l)` over thresholds on one grid; passes when
/// max/min of the ratios stays below 4.
pub fn paturi_band(n: usize, thresholds: &[usize]) -> Check {
    run("paturi_band", || {
        let mut ratios = Vec::new();
        for &l in thresholds {
            let d = SymmetricPredicate::threshold(n, l);
            let p = d.jump_profile();
            let deg = approx_degree(&d, Precision::Auto)?;
            ratios.push((l, deg, deg as f64 / ((n * (p.l0 + p.l1)) as f64).sqrt()));
        }
        let max = ratios.iter().map(|r| r.2).fold(f64::MIN, f64::max);
        let min = ratios.iter().map(|r| r.2).fold(f64::MAX, f64::min);
        let shown: Vec<String> = ratios.iter().map(|(l, d, r)| format!("l={l}: deg {d}, ratio {r:.4}")).collect();
        Ok((min > 0.0 && max / min < 4.0, format!("{}; max/min {:.4}", shown.join(", "), max / min)))
    })
}

/// Johnson schemes on `n <= 16` with at most `max_size` points and `k >= 1`.
fn small_schemes(max_size: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 2..=max_size.min(16) {
        for k in 1..=n / 2 {
            if binomial_big(n as i64, k as i64) <= BigInt::from(max_size) {
                out.push((n, k));
            }
        }
    }
    out
}

/// `phi^0(xi_P, Trace) <= ||P||_tr` for random integer matrices on Johnson sizes.
pub fn bound_on_trace(count: usize, seed: u64) -> Check {
    run("bound_on_trace", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schemes = small_schemes(50);
        let mut min_gap = f64::INFINITY;
        for _ in 0..count {
            let (n, k) = schemes[rng.random_range(0..schemes.len())];
            let test = build_test(n, k)?;
            let size = InstanceFamily::new(n, k, EXACT_BUDGET)?.len();
            let entries: Vec<i64> = (0..size * size).map(|_| rng.random_range(-3..=3)).collect();
            let p = DenseMatrix::from_vec(size, size, entries.iter().map(|&v| v as f64).collect())?;
            let xi: Vec<BigRational> = (0..test.r)
                .map(|s| {
                    let mu = test_matrix_exact(n, k, s, EXACT_BUDGET)?;
                    Ok(mu
                        .as_slice()
                        .iter()
                        .zip(&entries)
                        .filter(|(w, _)| !w.is_zero())
                        .fold(BigRational::zero(), |acc, (w, &v)| acc + w * BigInt::from(v)))
                })
                .collect::<Result<_>>()?;
            let phi = phi_epsilon_exact(&xi, &test.trace_vectors, &BigRational::zero())?;
            let tr = trace_norm(&p)?;
            min_gap = min_gap.min(tr + 1e-6 - phi.value);
        }
        Ok((min_gap >= 0.0, format!("{count} matrices, min (||P||_tr + 1e-6 - phi) = {min_gap:.6}")))
    })
}

/// `trace_lower_bound <= approx_trace_norm_upper` on random uniform instances.
pub fn sandwich(count: usize, seed: u64) -> Check {
    run("sandwich", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schemes = small_schemes(70);
        let mut worst = f64::INFINITY;
        for i in 0..count {
            let (n, k, d) = if i == 0 {
                (8, 2, SymmetricPredicate::disjointness(2))
            } else {
                let (n, k) = schemes[rng.random_range(0..schemes.len())];
                (n, k, random_predicate(&mut rng, k))
            };
            let lower = trace_lower_bound(n, k, &d, 0.25, Precision::Exact)?;
            let m = comm_matrix(&InstanceFamily::new(n, k, EXACT_BUDGET)?, &d)?;
            let upper = approx_trace_norm_upper(&m, 0.25)?;
            worst = worst.min(upper.value - lower.phi);
        }
        Ok((worst >= -1e-9, format!("{count} instances, min (upper - lower) = {worst:.6}")))
    })
}

/// `||P||_tr <= N 4^(c-1)` on random protocols, half with arbitrary
/// entanglement weights.
pub fn trace_bound_campaign(count: usize, seed: u64) -> Check {
    run("trace_bound_campaign", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut min_margin = f64::INFINITY;
        for i in 0..count {
            let dims = ProtocolDims::new(rng.random_range(1..=8), rng.random_range(1..=2), rng.random_range(1..=4));
            let c = rng.random_range(1..=4);
            let mode = if i % 2 == 0 { WeightMode::Uniform } else { WeightMode::Random };
            let spec = random_protocol(rng.random(), dims, c, mode)?;
            let rep = verify_trace_bound(&spec)?;
            min_margin = min_margin.min(rep.margin / rep.bound);
        }
        Ok((min_margin > 0.0, format!("{count} protocols, min relative margin {min_margin:.4}")))
    })
}

/// Kremer reconstruction and contraction on random protocols.
pub fn kremer_campaign(count: usize, seed: u64) -> Check {
    run("kremer_campaign", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut resid, mut norm) = (0.0f64, 0.0f64);
        for i in 0..count {
            let dims = ProtocolDims::new(rng.random_range(1..=4), rng.random_range(1..=2), rng.random_range(1..=2));
            let c = rng.random_range(1..=4);
            let mode = if i % 2 == 0 { WeightMode::Uniform } else { WeightMode::Random };
            let spec = random_protocol(rng.random(), dims, c, mode)?;
            let k = kremer_decompose(&spec)?;
            resid = resid.max(k.reconstruction_residual(&spec)?);
            norm = norm.max(k.max_operator_norm()?);
        }
        Ok((
            resid <= 1e-9 && norm <= 1.0 + 1e-9,
            format!("{count} protocols, max residual {resid:.3e}, max operator norm {norm:.12}"),
        ))
    })
}

/// `qcc_lower_bound(n, n/4, DISJ)` is positive and nondecreasing.
pub fn disj_growth(grid: &[usize]) -> Check {
    run("disj_growth", || {
        let mut values = Vec::new();
        for &n in grid {
            let k = n / 4;
            values.push(qcc_lower_bound(n, k, &SymmetricPredicate::disjointness(k), Precision::Auto)?);
        }
        let ok = values.iter().all(|&v| v > 0.0) && values.windows(2).all(|w| w[1] >= w[0]);
        let shown: Vec<String> = grid.iter().zip(&values).map(|(n, v)| format!("n={n}: {v:.6}")).collect();
        Ok((ok, shown.join(", ")))
    })
}

pub fn run_suite(budget: Budget, seed: u64) -> SuiteReport {
    let full = budget == Budget::Full;
    let pick = |small: usize, large: usize| if full { large } else { small };
    let checks = vec![
        hahn_vs_oracle(pick(8, 12), seed),
        spot_values(),
        decay(pick(12, 16)),
        polynomiality(pick(12, 16)),
        discrepancy_identities(pick(6, 10)),
        parity_degree(pick(4, 6)),
        error_monotone(pick(10, 50), seed),
        paturi_band(pick(16, 32), &[1, 2, 4, 8][..pick(3, 4)]),
        bound_on_trace(pick(10, 100), seed),
        sandwich(pick(4, 20), seed),
        trace_bound_campaign(pick(20, 200), seed),
        kremer_campaign(pick(5, 50), seed),
        disj_growth(&[8, 12, 16]),
    ];
    SuiteReport {
        budget,
        passed: all_passed(&checks),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        for c in [
            hahn_vs_oracle(6, 3),
            spot_values(),
            decay(8),
            polynomiality(8),
            discrepancy_identities(5),
            parity_degree(4),
            error_monotone(5, 1),
            bound_on_trace(3, 1),
            kremer_campaign(2, 1),
        ] {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn schemes_respect_size() {
        let s = small_schemes(50);
        assert!(s.contains(&(10, 2)) && s.contains(&(7, 3)) && !s.contains(&(8, 3)));
    }
}
