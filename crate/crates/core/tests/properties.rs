use entangle_core::monotones::{
    epsilon_n, epsilon_polynomial, frobenius_inner, mu_n, mu_polynomial, permanent,
    permanent_naive, tensor_power_inner_bruteforce, EtaSpectrum,
};
use entangle_core::pullback::{
    compute_pullback, fd_pullback_oracle, omega_blocks, schmidt_pullback,
};
use entangle_core::qcore::{
    expectation, is_hermitian, max_abs_diff, pauli_generators, schmidt_state, ComplexMatrix,
    ComplexVector, GeneratorSet, PureState,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

fn random_state(parts: &[(f64, f64)]) -> Option<PureState> {
    let v = ComplexVector::from_iterator(
        parts.len(),
        parts.iter().map(|&(a, b)| Complex64::new(a, b)),
    );
    if v.norm() < 1e-3 {
        return None;
    }
    PureState::normalize(v).ok()
}

fn random_hermitian(dim: usize, parts: &[(f64, f64)]) -> ComplexMatrix {
    let a =
        ComplexMatrix::from_iterator(dim, dim, parts.iter().map(|&(x, y)| Complex64::new(x, y)));
    (&a + a.adjoint()).unscale(2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_states_are_normalized(l in 0.0f64..=1.0) {
        let s = schmidt_state(l).unwrap();
        prop_assert!((s.amplitudes().norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_expectations_are_real(parts in complex_vec(4), h in complex_vec(16)) {
        let Some(psi) = random_state(&parts) else { return Ok(()); };
        let a = random_hermitian(4, &h);
        prop_assert!(expectation(&psi, &a).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn schmidt_tensor_structure(l in 0.0f64..=1.0) {
        let t = schmidt_pullback(l).unwrap();
        prop_assert!(is_hermitian(t.kappa(), 1e-12));
        let sp = EtaSpectrum::from_eta(t.eta()).unwrap();
        prop_assert!(sp.eigenvalues().iter().all(|&d| d >= -1e-10));
        let blocks = omega_blocks(t.omega()).unwrap();
        prop_assert!(blocks.cross_max_abs() < 1e-12);
        prop_assert!((blocks.block_a - blocks.block_b).amax() < 1e-12);
    }

    #[test]
    fn arbitrary_fiducial_matches_oracle(parts in complex_vec(4)) {
        // any pure two-qubit state, default generators
        let Some(psi) = random_state(&parts) else { return Ok(()); };
        let gens = pauli_generators();
        let t = compute_pullback(&psi, &gens).unwrap();
        let fd = fd_pullback_oracle(&psi, &gens, 1e-4).unwrap();
        prop_assert!(max_abs_diff(&fd, t.kappa()) < 1e-6);
        prop_assert!(omega_blocks(t.omega()).unwrap().cross_max_abs() < 1e-12);
        let min_eig = t.eta().clone().symmetric_eigenvalues().min();
        prop_assert!(min_eig > -1e-10);
    }

    #[test]
    fn arbitrary_generators_match_oracle(
        parts in complex_vec(3),
        g1 in complex_vec(9),
        g2 in complex_vec(9),
    ) {
        let Some(psi) = random_state(&parts) else { return Ok(()); };
        let gens = GeneratorSet::new(
            vec![random_hermitian(3, &g1), random_hermitian(3, &g2)],
            vec!["g1".into(), "g2".into()],
        ).unwrap();
        let t = compute_pullback(&psi, &gens).unwrap();
        let fd = fd_pullback_oracle(&psi, &gens, 1e-4).unwrap();
        // O(h^2) with generator norms up to ~3
        prop_assert!(max_abs_diff(&fd, t.kappa()) < 1e-5);
    }

    #[test]
    fn tensor_power_factorizes(entries in prop::collection::vec(-1.0f64..1.0, 9), n in 1u32..=3) {
        let a = DMatrix::from_vec(3, 3, entries);
        let brute = tensor_power_inner_bruteforce(&a, n).unwrap();
        let f = frobenius_inner(&a).powi(n as i32);
        prop_assert!((brute - f).abs() <= 1e-10 * f.max(1e-300));
    }

    #[test]
    fn monotone_symmetry_and_identity(l in 0.0f64..=1.0, n in 1u32..=5) {
        let e = epsilon_n(l, n).unwrap();
        let m = mu_n(l, n).unwrap();
        prop_assert!((e - epsilon_polynomial(l, n)).abs() <= 1e-12 * e);
        // mu comes from O(1) omega entries, so near l = 1/2 the error is absolute
        prop_assert!((m - mu_polynomial(l, n)).abs() <= 1e-12);
        prop_assert!((e - epsilon_n(1.0 - l, n).unwrap()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn ryser_matches_naive_on_binary(k in 1usize..=6, bits in prop::collection::vec(any::<bool>(), 36)) {
        let a = DMatrix::from_fn(k, k, |i, j| if bits[i * 6 + j] { 1.0 } else { 0.0 });
        prop_assert_eq!(permanent(&a).unwrap(), permanent_naive(&a).unwrap());
    }

    #[test]
    fn ryser_matches_naive_on_reals(k in 1usize..=6, vals in prop::collection::vec(-2.0f64..2.0, 36)) {
        let a = DMatrix::from_fn(k, k, |i, j| vals[i * 6 + j]);
        let r = permanent(&a).unwrap();
        let n = permanent_naive(&a).unwrap();
        prop_assert!((r - n).abs() <= 1e-10 * n.abs().max(1.0));
    }

    #[test]
    fn permanent_is_permutation_invariant(k in 2usize..=6, vals in prop::collection::vec(-2.0f64..2.0, 36), shift in 1usize..6) {
        let a = DMatrix::from_fn(k, k, |i, j| vals[i * 6 + j]);
        let rotated = DMatrix::from_fn(k, k, |i, j| a[((i + shift) % k, j)]);
        let p = permanent(&a).unwrap();
        prop_assert!((p - permanent(&rotated).unwrap()).abs() <= 1e-10 * p.abs().max(1.0));
    }
}

#[test]
fn epsilon_and_mu_monotone_on_each_half() {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for n in 1..=5 {
        let eps: Vec<f64> = grid.iter().map(|&l| epsilon_n(l, n).unwrap()).collect();
        let mu: Vec<f64> = grid.iter().map(|&l| mu_n(l, n).unwrap()).collect();
        for i in 0..50 {
            assert!(eps[i + 1] >= eps[i] - 1e-15, "epsilon_{n} at {}", grid[i]);
            assert!(mu[i + 1] <= mu[i] + 1e-15, "mu_{n} at {}", grid[i]);
        }
        for i in 50..100 {
            assert!(eps[i + 1] <= eps[i] + 1e-15);
            assert!(mu[i + 1] >= mu[i] - 1e-15);
        }
        for i in 0..=100 {
            assert!((eps[i] - eps[100 - i]).abs() < 1e-12);
            assert!((mu[i] - mu[100 - i]).abs() < 1e-12);
        }
    }
}
