//! Randomized invariant checks over the public API.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use upt_core::entangle::{h_k, h_k_brute, EntanglementProfile};
use upt_core::haar::{haar_state, haar_subspace};
use upt_core::oracle::reflection_from_subspace;
use upt_core::perm::{decode_index, encode_index, permutation_operator, Permutation};
use upt_core::state::schmidt_spectrum;
use upt_core::tester::{membership_test, product_test_probability};
use upt_core::util::{fidelity_from_overlap, mean_stderr, trace_distance_pure};
use upt_core::{Seed, StateVector};

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(Permutation::from_one_line)
}

fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..1.0f64, 1..6).prop_map(|mut v| {
        let s: f64 = v.iter().sum();
        for x in &mut v {
            *x /= s;
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_inverse_and_sign(sigma in (1usize..7).prop_flat_map(perm_strategy)) {
        let n = sigma.n();
        prop_assert_eq!(sigma.compose(&sigma.inverse()), Permutation::identity(n));
        prop_assert_eq!(sigma.inverse().compose(&sigma), Permutation::identity(n));
        prop_assert_eq!(sigma.sign() * sigma.inverse().sign(), 1);
        let expected_sign = if (n - sigma.num_cycles()) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(sigma.sign(), expected_sign);
    }

    #[test]
    fn cycles_partition_the_domain(sigma in (1usize..8).prop_flat_map(perm_strategy)) {
        let mut seen = vec![false; sigma.n()];
        for cycle in sigma.cycles() {
            prop_assert!(!cycle.is_empty());
            for &x in &cycle {
                prop_assert!(!seen[x], "element {} appears twice", x);
                seen[x] = true;
            }
        }
        prop_assert!(seen.iter().all(|&b| b));
        prop_assert_eq!(sigma.cycle_type().iter().sum::<usize>(), sigma.n());
    }

    #[test]
    fn composition_is_associative(
        (a, b, c) in (2usize..6).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), perm_strategy(n)))
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn index_codec_roundtrips(
        (shape, idx) in prop::collection::vec(1usize..5, 1..5)
            .prop_flat_map(|shape| {
                let dim: usize = shape.iter().product();
                (Just(shape), 0..dim)
            })
    ) {
        let digits = decode_index(idx, &shape);
        prop_assert_eq!(digits.len(), shape.len());
        for (d, s) in digits.iter().zip(&shape) {
            prop_assert!(d < s);
        }
        prop_assert_eq!(encode_index(&digits, &shape), idx);
    }

    #[test]
    fn h_k_recurrence_matches_brute_force(
        spectrum in spectrum_strategy(),
        k in 0usize..5,
    ) {
        let fast = h_k(&spectrum, k);
        let brute = h_k_brute(&spectrum, k);
        prop_assert!((fast - brute).abs() <= 1e-12, "{fast} vs {brute}");
    }

    #[test]
    fn h_k_of_a_distribution_is_sandwiched(spectrum in spectrum_strategy(), k in 1usize..5) {
        let top = spectrum.iter().cloned().fold(0.0, f64::max);
        let v = h_k(&spectrum, k);
        prop_assert!(v >= top.powi(k as i32) - 1e-12);
        prop_assert!(v <= 1.0 + 1e-12);
    }

    #[test]
    fn distance_helpers_are_consistent(overlap in 0.0f64..1.0) {
        let f = fidelity_from_overlap(overlap);
        prop_assert!((0.0..=1.0).contains(&f));
        let td = trace_distance_pure(f);
        prop_assert!((td * td + f - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mean_stderr_of_a_constant_batch(c in -10.0f64..10.0, n in 2usize..50) {
        let (mean, se) = mean_stderr(&vec![c; n]);
        prop_assert!((mean - c).abs() <= 1e-12);
        prop_assert!(se.abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schmidt_spectrum_is_a_sorted_distribution(
        seed in any::<u64>(), d1 in 2usize..5, d2 in 2usize..5,
    ) {
        let psi = haar_state(vec![d1, d2], Seed(seed));
        let spec = schmidt_spectrum(&psi, d1, d2);
        prop_assert_eq!(spec.len(), d1.min(d2));
        let total: f64 = spec.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        for w in spec.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12);
        }
        prop_assert!(spec[spec.len() - 1] >= -1e-12);
    }

    #[test]
    fn purity_is_sandwiched_by_overlap(seed in any::<u64>(), d in 2usize..5) {
        let psi = haar_state(vec![d, d], Seed(seed));
        let prof = EntanglementProfile::of(&psi, d, d);
        let omega = prof.closest_product_overlap;
        prop_assert!(omega * omega <= prof.purity + 1e-10);
        prop_assert!(prof.purity <= omega + 1e-10);
    }

    #[test]
    fn register_permutation_agrees_with_its_operator(
        seed in any::<u64>(),
        sigma in perm_strategy(3),
    ) {
        let psi = haar_state(vec![2, 2, 2], Seed(seed));
        let direct = psi.apply_register_permutation(&sigma);
        let via_matrix = psi.apply_matrix_to_span(&permutation_operator(&sigma, 2), 0, 3);
        let diff = direct.add(&via_matrix.scale(C64::new(-1.0, 0.0))).norm();
        prop_assert!(diff <= 1e-12, "mismatch {diff}");
        prop_assert!((direct.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn symmetrization_is_a_projection(seed in any::<u64>()) {
        let psi = haar_state(vec![2, 2, 2], Seed(seed));
        let once = psi.symmetrize_registers(&[0, 1, 2]);
        let twice = once.symmetrize_registers(&[0, 1, 2]);
        let diff = once.add(&twice.scale(C64::new(-1.0, 0.0))).norm();
        prop_assert!(diff <= 1e-12);
        prop_assert!(once.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn reflection_is_an_involution(seed in any::<u64>(), d in 2usize..7, s in 1usize..3) {
        prop_assume!(s < d);
        let sub = haar_subspace(vec![d], s, Seed(seed));
        let o = reflection_from_subspace(sub);
        let v = haar_state(vec![d], Seed(seed ^ 0x9e37_79b9_7f4a_7c15));
        let rv = o.apply(&v, 0, 1, false);
        let rrv = o.apply(&rv, 0, 1, false);
        let diff = rrv.add(&v.scale(C64::new(-1.0, 0.0))).norm();
        prop_assert!(diff <= 1e-9, "R^2 deviates from identity by {diff}");
        prop_assert!((rv.norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn membership_probability_in_range_and_queries_counted(
        seed in any::<u64>(), d in 2usize..7, s in 1usize..4,
    ) {
        prop_assume!(s <= d);
        let sub = haar_subspace(vec![d], s, Seed(seed));
        let o = reflection_from_subspace(sub);
        let proof = haar_state(vec![d], Seed(seed.wrapping_add(1)));
        let q0 = o.queries_used();
        let report = membership_test(&o, &proof).unwrap();
        prop_assert!(report.accept_probability >= -1e-10);
        prop_assert!(report.accept_probability <= 1.0 + 1e-10);
        prop_assert_eq!(report.queries_used, o.queries_used() - q0);
    }

    #[test]
    fn product_test_probability_in_range(seed in any::<u64>()) {
        let input = haar_state(vec![2, 2, 2, 2], Seed(seed));
        let p = product_test_probability(&input, 2, 2).unwrap();
        prop_assert!(p >= -1e-10);
        prop_assert!(p <= 1.0 + 1e-10);
    }

    #[test]
    fn seed_splits_are_deterministic_and_distinct(base in any::<u64>()) {
        use rand::Rng;
        let seed = Seed(base);
        let firsts: Vec<u64> = (0..64).map(|i| seed.split(i).rng().gen()).collect();
        let again: Vec<u64> = (0..64).map(|i| seed.split(i).rng().gen()).collect();
        prop_assert_eq!(&firsts, &again);
        let mut sorted = firsts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), 64, "collision among split streams");
    }

    #[test]
    fn tensor_power_shape_and_norm(seed in any::<u64>(), n in 1usize..4) {
        let psi = haar_state(vec![2, 3], Seed(seed));
        let big = psi.tensor_power(n);
        prop_assert_eq!(big.shape().len(), 2 * n);
        prop_assert!((big.norm() - 1.0).abs() <= 1e-10);
        let first = StateVector::basis_state(vec![2, 3], &[0, 0]).inner(&psi);
        let corner = StateVector::basis_state(big.shape().to_vec(), &vec![0; 2 * n]).inner(&big);
        prop_assert!((corner - first.powu(n as u32)).norm() <= 1e-10);
    }
}
