//! Cross-checks against independently computed references.

use approx::assert_relative_eq;
use entangle_core::estimation::{
    measurement_at, measurements_closed, measurements_parametric, qfi_pure_fd, qfi_schmidt,
    sld_check, MeasureKind,
};
use entangle_core::monotones::{
    frobenius_inner, sym_inner_bruteforce, sym_inner_closed, sym_invariant_polynomial, EtaSpectrum,
};
use entangle_core::pullback::{eta_rank, schmidt_pullback, RANK_TOL};
use entangle_core::qcore::{expectation, pauli_generators, schmidt_state, PureState};
use entangle_core::Result;

fn schmidt(l: f64) -> Result<PureState> {
    schmidt_state(l)
}

#[test]
fn kappa_matches_expectation_route() {
    // kappa_jk = <X_j X_k> - <X_j><X_k> evaluated with plain expectations
    let gens = pauli_generators();
    for l in [0.0, 0.15, 0.25, 0.5, 0.9] {
        let psi = schmidt_state(l).unwrap();
        let t = schmidt_pullback(l).unwrap();
        for j in 0..6 {
            for k in 0..6 {
                let xj = gens.get(j).unwrap();
                let xk = gens.get(k).unwrap();
                let expected = expectation(&psi, &(xj * xk)).unwrap()
                    - expectation(&psi, xj).unwrap() * expectation(&psi, xk).unwrap();
                assert!((t.kappa()[(j, k)] - expected).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn eta_norm_in_terms_of_linear_entropy() {
    // <eta|eta> = 4 + 4s + 4s^2 with s = 4 l (1 - l)
    for i in 0..=20 {
        let l = i as f64 / 20.0;
        let s = 4.0 * l * (1.0 - l);
        let f = frobenius_inner(schmidt_pullback(l).unwrap().eta());
        assert_relative_eq!(f, 4.0 + 4.0 * s + 4.0 * s * s, max_relative = 1e-12);
    }
}

#[test]
fn rank_pattern_on_grid() {
    for i in 0..=20 {
        let l = i as f64 / 20.0;
        let r = eta_rank(schmidt_pullback(l).unwrap().eta(), RANK_TOL);
        let expected = match i {
            10 => 3,
            0 | 20 => 4,
            _ => 5,
        };
        assert_eq!(r, expected, "lambda {l}");
    }
}

#[test]
fn sym_closed_matches_bruteforce_order_two() {
    for l in [0.25, 0.5] {
        let t = schmidt_pullback(l).unwrap();
        let brute = sym_inner_bruteforce(t.eta(), 2).unwrap();
        let closed = sym_inner_closed(&EtaSpectrum::from_eta(t.eta()).unwrap(), 2).unwrap();
        assert_relative_eq!(brute, closed, max_relative = 1e-9);
    }
}

#[test]
fn sym_closed_on_diagonal_inputs() {
    // for diag(d) and n = 2 the brute force reduces to
    // (1/24) [ sum_v 24 d_v^4 + sum_{v<w} 4 * 2 * 2 d_v^2 d_w^2 ]
    let d: [f64; 6] = [1.5, 0.7, 0.3, 0.0, 2.0, 0.1];
    let mut eta = nalgebra::DMatrix::zeros(6, 6);
    for (i, &x) in d.iter().enumerate() {
        eta[(i, i)] = x;
    }
    let mut expected = 0.0;
    for v in 0..6 {
        expected += 24.0 * d[v].powi(4);
        for w in v + 1..6 {
            expected += 16.0 * d[v].powi(2) * d[w].powi(2);
        }
    }
    expected /= 24.0;
    let closed = sym_inner_closed(&EtaSpectrum::from_eta(&eta).unwrap(), 2).unwrap();
    assert_relative_eq!(closed, expected, max_relative = 1e-12);
    assert_relative_eq!(
        sym_inner_bruteforce(&eta, 2).unwrap(),
        expected,
        max_relative = 1e-12
    );
}

#[test]
fn sym_proportionality_constants() {
    for (n, c) in [(1u32, 4.0), (2, 36.0), (3, 216.0)] {
        for i in 0..=20 {
            let l = i as f64 / 20.0;
            let s = sym_inner_closed(&EtaSpectrum::of_schmidt(l).unwrap(), n).unwrap();
            assert_relative_eq!(
                s / sym_invariant_polynomial(n, l).unwrap(),
                c,
                max_relative = 1e-9
            );
        }
    }
}

#[test]
fn qfi_identity_with_linear_entropy() {
    for i in 1..100 {
        let l = i as f64 / 100.0;
        let e = MeasureKind::LinearEntropy.value(l).unwrap();
        assert_relative_eq!(e * qfi_schmidt(l).unwrap() / 4.0, 1.0, max_relative = 1e-10);
    }
}

#[test]
fn qfi_fd_and_sld_on_grid() {
    for i in 1..=19 {
        let l = i as f64 / 20.0;
        let exact = qfi_schmidt(l).unwrap();
        assert_relative_eq!(
            qfi_pure_fd(schmidt, l, 1e-5).unwrap(),
            exact,
            max_relative = 1e-6
        );
        let sld = sld_check(schmidt, l, 1e-5).unwrap();
        assert_relative_eq!(sld.qfi, exact, max_relative = 1e-6);
        assert!(sld.anticommutator_residual < 1e-6);
    }
}

#[test]
fn qfi_fd_second_order() {
    for l in [0.05, 0.1, 0.2, 0.3] {
        let exact = qfi_schmidt(l).unwrap();
        let err = |h: f64| (qfi_pure_fd(schmidt, l, h).unwrap() - exact).abs();
        let ratio = err(1e-3) / err(5e-4);
        assert!((ratio - 4.0).abs() < 0.2, "lambda {l}: ratio {ratio}");
    }
}

#[test]
fn curves_mirror_across_half() {
    use MeasureKind::*;
    for kind in [LinearEntropy, Negativity, Purity, Epsilon(2), Mu(3)] {
        for i in 1..50 {
            let l = i as f64 / 100.0;
            let a = measurement_at(kind, 1.0, l).unwrap();
            let b = measurement_at(kind, 1.0, 1.0 - l).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6, epsilon = 1e-12);
            let va = kind.value(l).unwrap();
            let vb = kind.value(1.0 - l).unwrap();
            assert_relative_eq!(va, vb, max_relative = 1e-12);
        }
    }
}

#[test]
fn weak_entanglement_contrast() {
    use MeasureKind::*;
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 1000.0).collect();
    let le = measurements_parametric(LinearEntropy, 1.0, &grid).unwrap();
    let neg = measurements_parametric(Negativity, 1.0, &grid).unwrap();
    // grows without bound as lambda -> 0
    assert!(le.points[0].measurements > 900.0);
    assert!(neg.points[0].measurements > 200.0);
    assert!(le
        .points
        .windows(2)
        .all(|w| w[0].measurements > w[1].measurements));
    for n in 1..=5 {
        let mu = measurements_parametric(Mu(n), 1.0, &grid).unwrap();
        assert!(mu.points[0].measurements < 0.02 * (n * n) as f64);
        let eps = measurements_parametric(Epsilon(n), 1.0, &grid).unwrap();
        assert!(eps.points.iter().all(|p| p.measurements.is_finite()));
        assert!(eps.points[0].measurements < 1.0);
    }
}

#[test]
fn parametric_matches_closed_near_edges() {
    use MeasureKind::*;
    let grid = [0.001, 0.002, 0.01, 0.49, 0.499];
    for kind in [LinearEntropy, Negativity, Purity] {
        let curve = measurements_parametric(kind, 1.0, &grid).unwrap();
        for p in curve.points {
            let closed = measurements_closed(kind, p.measure, 1.0).unwrap();
            assert_relative_eq!(p.measurements, closed, max_relative = 1e-6);
        }
    }
}
