mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symcc::approx::{best_poly_approx, phi_epsilon, phi_epsilon_exact, Precision};
use symcc::johnson::{
    build_test, hahn_eigenvalue, intersection_matrix, mu_normalizer, valency,
};
use symcc::matnorm::{approx_trace_norm_upper, frobenius, inner, l1, linf, operator_norm, trace_norm};
use symcc::protosim::{random_protocol, run_protocol, verify_trace_bound, ProtocolDims, WeightMode};
use symcc::SymmetricPredicate;

use common::{random_matrix, random_orthogonal};

fn scheme() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=16).prop_flat_map(|n| (Just(n), 0..=n / 2))
}

fn predicate(max_n: usize) -> impl Strategy<Value = SymmetricPredicate> {
    prop::collection::vec(any::<bool>(), 1..=max_n + 1).prop_map(|v| SymmetricPredicate::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t0_eigenvalue_is_valency((n, k) in scheme(), s in 0usize..=8) {
        prop_assume!(s <= k);
        prop_assert_eq!(hahn_eigenvalue(n, k, s, 0).unwrap(), valency(n, k, s));
    }

    #[test]
    fn unnormalised_diagonal_eigenvalue_is_one((n, k) in scheme(), t in 0usize..=8) {
        prop_assume!(t <= k);
        prop_assert_eq!(hahn_eigenvalue(n, k, k, t).unwrap(), BigInt::from(1));
    }

    #[test]
    fn trace_vectors_are_normalised_eigenvalues((n, k) in scheme()) {
        let test = build_test(n, k).unwrap();
        prop_assert_eq!(test.r, k / 2 + 1);
        for (t, v) in test.trace_vectors.iter().enumerate() {
            for (s, x) in v.iter().enumerate() {
                let want = BigRational::new(hahn_eigenvalue(n, k, s, t).unwrap(), mu_normalizer(n, k, s));
                prop_assert_eq!(x, &want);
            }
        }
    }

    #[test]
    fn mu_matrices_commute(n in 2usize..=9, k in 1usize..=4, s1 in 0usize..=4, s2 in 0usize..=4) {
        prop_assume!(2 * k <= n && s1 <= k && s2 <= k);
        let a = intersection_matrix(n, k, s1, 200).unwrap();
        let b = intersection_matrix(n, k, s2, 200).unwrap();
        let ab = a.matmul(&b).unwrap();
        let ba = b.matmul(&a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba).unwrap() < 1e-9);
    }

    #[test]
    fn poly_error_nonincreasing(d in predicate(14)) {
        let mut prev = f64::INFINITY;
        for deg in 0..=d.n() {
            let p = best_poly_approx(&d, deg, Precision::Float).unwrap();
            prop_assert!(p.error <= prev + 1e-9);
            prop_assert!((p.recomputed_error(&d) - p.error).abs() <= 1e-9);
            prev = p.error;
        }
    }

    #[test]
    fn phi_nonincreasing_in_eps((n, k) in (4usize..=16).prop_flat_map(|n| (Just(n), 1..=n / 2)), bits in any::<u16>()) {
        let test = build_test(n, k).unwrap();
        let trace = test.trace_vectors_f64();
        let xi: Vec<f64> = (0..test.r).map(|s| (bits >> s & 1) as f64).collect();
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.1, 0.25, 0.4, 0.5, 1.0] {
            let c = phi_epsilon(&xi, &trace, eps).unwrap();
            prop_assert!(c.value <= prev * (1.0 + 1e-9) + 1e-12);
            prop_assert!(c.residual_linf() <= eps + 1e-9);
            prop_assert!((c.l1_coefficients() - c.value).abs() <= 1e-9 * c.value.max(1.0));
            prev = c.value;
        }
    }

    #[test]
    fn phi_is_homogeneous((n, k) in (2usize..=12).prop_flat_map(|n| (Just(n), 1..=n / 2)),
                          xi in prop::collection::vec(-5i64..=5, 7), c in -6i64..=6) {
        let test = build_test(n, k).unwrap();
        let xi: Vec<BigRational> = xi[..test.r].iter().map(|&v| BigRational::from_integer(v.into())).collect();
        let scaled: Vec<BigRational> = xi.iter().map(|v| v * BigInt::from(c)).collect();
        let base = phi_epsilon_exact(&xi, &test.trace_vectors, &BigRational::zero()).unwrap();
        let big = phi_epsilon_exact(&scaled, &test.trace_vectors, &BigRational::zero()).unwrap();
        let want = base.exact_value.unwrap() * BigRational::from_integer(BigInt::from(c).abs());
        prop_assert_eq!(big.exact_value.unwrap(), want);
    }

    #[test]
    fn approx_witness_is_feasible(seed in any::<u64>(), m in 1usize..=6, n in 1usize..=6, eps in 0.0f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, m, n);
        let r = approx_trace_norm_upper(&a, eps).unwrap();
        prop_assert!(a.max_abs_diff(&r.witness).unwrap() <= eps);
        prop_assert!(r.value <= trace_norm(&a).unwrap() + 1e-9);
        prop_assert!((r.value - trace_norm(&r.witness).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn norm_inequalities(seed in any::<u64>(), m in 1usize..=6, n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, m, n);
        let b = random_matrix(&mut rng, m, n);
        let (op, f, tr) = (operator_norm(&a).unwrap(), frobenius(&a), trace_norm(&a).unwrap());
        prop_assert!(op <= f + 1e-9 && f <= tr + 1e-9);
        prop_assert!((inner(&a, &a).unwrap() - f * f).abs() <= 1e-9);
        prop_assert!(inner(&a, &b).unwrap().abs() <= l1(&a) * linf(&b) + 1e-9);
        prop_assert!(inner(&a, &b).unwrap().abs() <= tr * operator_norm(&b).unwrap() + 1e-9);
        let u = random_orthogonal(&mut rng, m);
        prop_assert!((trace_norm(&u.matmul(&a).unwrap()).unwrap() - tr).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn protocol_probabilities_in_range(seed in any::<u64>(), x in 1usize..=5, w in 1usize..=2, e in 1usize..=3,
                                       c in 1usize..=4, random in any::<bool>()) {
        let mode = if random { WeightMode::Random } else { WeightMode::Uniform };
        let spec = random_protocol(seed, ProtocolDims::new(x, w, e), c, mode).unwrap();
        for i in 0..x {
            for j in 0..x {
                let mut state = spec.input_state(i, j).unwrap();
                spec.evolve(&mut state).unwrap();
                let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
                prop_assert!((norm - 1.0).abs() <= 1e-10);
                let p = run_protocol(&spec, i, j).unwrap();
                prop_assert!((-1e-12..=1.0 + 1e-10).contains(&p));
            }
        }
        let rep = verify_trace_bound(&spec).unwrap();
        prop_assert!(rep.trace_norm <= rep.bound);
    }
}
