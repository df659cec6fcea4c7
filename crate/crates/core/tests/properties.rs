use ewitness::analysis::lu_equivalent_by;
use ewitness::catalog::{bit_triples, w3q_pair};
use ewitness::linops::{
    generalized_bell, haar_unitary, matrix_to_pauli, pauli_to_matrix, random_density,
    random_hermitian, tensor, weyl, c, Dims, Operator,
};
use ewitness::sepopt::{seesaw, SeesawConfig, Sense};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 3]),
        Just(vec![2, 2, 2]),
        Just(vec![3, 2, 2]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_is_linear_involutive_and_trace_preserving(
        dims in dims_strategy(), seed in any::<u64>(), a in -2.0f64..2.0, mask in 1usize..8,
    ) {
        let d = Dims::new(dims.clone()).unwrap();
        let mut r = rng(seed);
        let x = random_hermitian(&d, &mut r);
        let y = random_hermitian(&d, &mut r);
        let subset: Vec<usize> = (0..dims.len()).filter(|k| mask >> k & 1 == 1).collect();
        let pt = |o: &Operator| o.partial_transpose(&subset).unwrap();
        let lhs = pt(&(&x.scale(a) + &y));
        let rhs = &pt(&x).scale(a) + &pt(&y);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!(pt(&pt(&x)).max_abs_diff(&x) < 1e-14);
        prop_assert!((pt(&x).trace_re() - x.trace_re()).abs() < 1e-12);
    }

    #[test]
    fn pauli_expansion_round_trips(n in 1usize..4, seed in any::<u64>()) {
        let h = random_hermitian(&Dims::qubits(n), &mut rng(seed));
        let back = pauli_to_matrix(&matrix_to_pauli(&h).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn weyl_operators_compose_up_to_phase(
        n in 2usize..6, m1 in 0usize..6, k1 in 0usize..6, m2 in 0usize..6, k2 in 0usize..6,
    ) {
        let (m1, k1, m2, k2) = (m1 % n, k1 % n, m2 % n, k2 % n);
        let lhs = weyl(n, m1, k1).matmul(&weyl(n, m2, k2));
        let ang = 2.0 * PI * ((m1 * k2) % n) as f64 / n as f64;
        let rhs = weyl(n, (m1 + m2) % n, (k1 + k2) % n);
        let rhs = Operator::from_matrix(rhs.data() * c(ang.cos(), ang.sin())).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn bell_vectors_are_orthonormal(n in 2usize..6, a in 0usize..36, b in 0usize..36) {
        let (a, b) = (a % (n * n), b % (n * n));
        let va = generalized_bell(n, a / n, a % n);
        let vb = generalized_bell(n, b / n, b % n);
        let want = if a == b { 1.0 } else { 0.0 };
        prop_assert!((va.dotc(&vb).norm() - want).abs() < 1e-12);
    }

    #[test]
    fn mirrored_pairs_never_detect_jointly(seed in any::<u64>(), idx in 0usize..8) {
        let p = w3q_pair(bit_triples()[idx]).unwrap();
        let rho = random_density(&Dims::qubits(3), &mut rng(seed));
        let vw = p.w.op.expect(&rho);
        let vm = p.m.expect(&rho);
        prop_assert!((vw + vm - p.mu).abs() < 1e-12);
        prop_assert!(!(vw < 0.0 && vm < 0.0));
    }

    #[test]
    fn lu_equivalence_is_detected(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims::uniform(2, 3);
        let a = random_hermitian(&d, &mut r);
        let locals: Vec<Operator> = (0..3).map(|_| haar_unitary(2, &mut r)).collect();
        let u = tensor(&locals).unwrap().with_dims(d).unwrap();
        let b = a.conjugate_by(&u);
        prop_assert!(lu_equivalent_by(&a, &b, &locals).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn seesaw_is_monotone_and_brackets_the_spectrum(dims in dims_strategy(), seed in any::<u64>()) {
        let d = Dims::new(dims).unwrap();
        let h = random_hermitian(&d, &mut rng(seed));
        let cfg = SeesawConfig::default().with_restarts(8).with_seed(seed);
        let lo = seesaw(&h, Sense::Min, &cfg).unwrap();
        let hi = seesaw(&h, Sense::Max, &cfg).unwrap();
        let (lmin, lmax) = h.eig_extremes().unwrap();
        prop_assert!(lo.monotone && hi.monotone);
        prop_assert!(lmin - 1e-10 <= lo.value);
        prop_assert!(lo.value <= hi.value);
        prop_assert!(hi.value <= lmax + 1e-10);
        prop_assert!((lo.state.expectation(&h) - lo.value).abs() < 1e-9);
    }

    #[test]
    fn separable_extremes_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims::qubits(2);
        let h = random_hermitian(&d, &mut r);
        let locals: Vec<Operator> = (0..2).map(|_| haar_unitary(2, &mut r)).collect();
        let u = tensor(&locals).unwrap().with_dims(d).unwrap();
        let cfg = SeesawConfig::default().with_restarts(16);
        let a = seesaw(&h, Sense::Min, &cfg).unwrap().value;
        let b = seesaw(&h.conjugate_by(&u), Sense::Min, &cfg).unwrap().value;
        prop_assert!((a - b).abs() < 1e-8);
    }
}
