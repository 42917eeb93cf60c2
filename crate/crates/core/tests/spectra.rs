use kronspin::{
    build_h2, eigh, kron, lanczos_extremal, spec_to_kronsum, total_component, total_spin_squared,
    verify_h2_decomposition, Complex64, ComplexMatrix, HamiltonianSpec, KronSum, LanczosConfig,
    PauliAxis, WeightTriple, Which,
};
use proptest::prelude::*;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn sz_multiplicities_are_binomial() {
    for n in 1..=6 {
        let s = eigh(&total_component(PauliAxis::Z, n).unwrap(), false).unwrap();
        let got = s.multiplicities(1e-8);
        assert_eq!(got.len(), n + 1);
        for (k, (value, mult)) in got.iter().enumerate() {
            // Level k has k spins up.
            let m = n as f64 / 2.0 - (n - k) as f64;
            assert!((value - m).abs() < 1e-10, "n={n}: {value} vs {m}");
            assert_eq!(*mult as u64, binomial(n as u64, (n - k) as u64));
        }
    }
}

#[test]
fn s2_multiplicities_follow_spin_addition() {
    for n in 2..=6u64 {
        let s = eigh(&total_spin_squared(n as usize).unwrap(), false).unwrap();
        let got = s.multiplicities(1e-8);
        // Spin s appears C(n, n/2 - s) - C(n, n/2 - s - 1) times, each (2s + 1)-fold.
        let mut want = Vec::new();
        let mut two_s = n % 2;
        while two_s <= n {
            let down = (n - two_s) / 2;
            let above = if down == 0 { 0 } else { binomial(n, down - 1) };
            let count = binomial(n, down) - above;
            let spin = two_s as f64 / 2.0;
            want.push((spin * (spin + 1.0), count * (two_s + 1)));
            two_s += 2;
        }
        assert_eq!(got.len(), want.len(), "n={n}");
        for ((gv, gm), (wv, wm)) in got.iter().zip(&want) {
            assert!((gv - wv).abs() < 1e-9);
            assert_eq!(*gm as u64, *wm);
        }
    }
}

#[test]
fn lanczos_matches_dense_on_small_chains() {
    for n in 2..=8 {
        let spec = HamiltonianSpec::chain(n, 0.3, 1.0).unwrap();
        let dense = eigh(&kronspin::build_general(&spec).unwrap(), false).unwrap();
        let cfg = LanczosConfig {
            which: Which::Highest,
            ..LanczosConfig::default()
        };
        let top = lanczos_extremal(&spec_to_kronsum(&spec), &cfg).unwrap();
        assert!((top.eigenvalues[0] - dense.eigenvalues.last().unwrap()).abs() < 1e-8);
    }
}

#[test]
fn total_spin_matrix_free_matches_dense() {
    for n in 1..=5 {
        let matfree = KronSum::total_spin_squared(n).unwrap().to_dense().unwrap();
        let dense = total_spin_squared(n).unwrap();
        assert!(matfree.max_abs_diff(&dense).unwrap() < 1e-13);
    }
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        let data = v
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        let m = ComplexMatrix::new(n, n, data).unwrap();
        m.add(&m.adjoint()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h2_closed_form(mu in -3.0..3.0f64, j in -3.0..3.0f64) {
        let got = eigh(&build_h2(mu, j), false).unwrap().eigenvalues;
        let mut want = [-3.0 * j, j - 2.0 * mu, j, j + 2.0 * mu];
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn decomposition_for_isotropic_weights(a in -3.0..3.0f64) {
        let d = verify_h2_decomposition(WeightTriple::isotropic(a), -a);
        prop_assert!(d.report.passed, "{:?}", d.report);
        prop_assert!(d.squared_components.iter().all(|r| r.passed));
    }

    #[test]
    fn eigh_reconstructs((n, a) in (1..=7usize).prop_flat_map(|n| (Just(n), hermitian(n)))) {
        let s = eigh(&a, true).unwrap();
        let v = s.eigenvectors.as_ref().unwrap();
        let d = ComplexMatrix::from_diagonal(
            &s.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(),
        )
        .unwrap();
        let back = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();
        prop_assert!(back.distance(&a).unwrap() < 1e-9 * a.frobenius_norm().max(1.0));
        prop_assert!(v.adjoint().matmul(v).unwrap().is_identity(1e-9));
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(s.dimension, n);
    }

    #[test]
    fn swapped_factors_share_spectrum(a in hermitian(3), b in hermitian(2)) {
        let s1 = eigh(&kron(&a, &b).unwrap(), false).unwrap();
        let s2 = eigh(&kron(&b, &a).unwrap(), false).unwrap();
        prop_assert!(kronspin::linalg::spectrum_multiset_equal(&s1, &s2, 1e-8));
    }
}
