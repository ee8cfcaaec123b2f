//! End-to-end acceptance checks, one test per headline property.
//! Every test prints exactly one `PASS ...` line (visible with
//! `--nocapture`) stating what was measured and against which bound;
//! a failed assertion is the corresponding FAIL.

use num_complex::Complex64 as C64;
use upt_core::audit::{
    conjugation_invariance_audit, dimension_polynomial_fit, recurrence_surface,
    MaxEntangledMembership, RecurrenceAcceptance,
};
use upt_core::entangle::{
    closest_product_overlap, product_test_lower_bound_k2, product_test_upper_bound,
    subspace_max_product_overlap, EntanglementProfile,
};
use upt_core::exec;
use upt_core::fooling::{
    counterexample_state, counterexample_subspace, g_invariant_numerators, permute_numerators,
    representation_matrix, symmetrizer_on_basis, FoolingStateKind, YoungTableau,
};
use upt_core::haar::{haar_state, haar_unitary};
use upt_core::invariant::{
    gram_identity_holds, lu_invariant_state, spectrum_dependence_audit, weingarten_average_check,
};
use upt_core::oracle::{reflection_from_subspace, Oracle};
use upt_core::perm::Permutation;
use upt_core::phase::{
    default_dimension_bits, default_grover_schedule, default_recurrence_bits,
    dimension_block_eigenphases, dimension_estimator, recurrence_tester,
};
use upt_core::tester::{
    product_test_closed_form, product_test_probability, product_test_verifier,
    wrapped_qma_verifier, Decision,
};
use upt_core::{CMatrix, Seed, StateVector, Subspace};

fn pass(id: u32, what: &str, detail: String) {
    println!("PASS {id:02} {what}: {detail}");
}

#[test]
fn a01_product_test_acceptance_is_exactly_h_k() {
    let mut worst: f64 = 0.0;
    for d in [2usize, 3, 4] {
        for k in [2usize, 3, 4] {
            let seed = Seed(100 + (d * 10 + k) as u64);
            let devs = exec::map_trials(100, |i| {
                let psi = haar_state(vec![d, d], seed.split(i));
                let sim = product_test_probability(&psi.tensor_power(k), k, d)
                    .expect("input is k copies");
                (sim - product_test_closed_form(&psi, k)).abs()
            });
            worst = devs.iter().copied().fold(worst, f64::max);
        }
    }
    assert!(worst < 1e-10, "max |simulated - closed form| = {worst}");
    pass(
        1,
        "product-test exactness",
        format!("900 states, d,k in 2..=4, max deviation {worst:.3e} < 1e-10"),
    );
}

#[test]
fn a02_product_test_bounds_hold() {
    let mut worst: f64 = f64::NEG_INFINITY;
    for d in [2usize, 3, 4] {
        let seed = Seed(200 + d as u64);
        let rows = exec::map_trials(100, |i| {
            let psi = haar_state(vec![d, d], seed.split(i));
            let omega = closest_product_overlap(&psi, d, d);
            let a2 = product_test_closed_form(&psi, 2);
            let mut v = product_test_lower_bound_k2(omega) - a2;
            v = v.max(a2 - product_test_upper_bound(2, omega));
            for k in [3usize, 4] {
                v = v.max(product_test_closed_form(&psi, k) - product_test_upper_bound(k, omega));
            }
            v
        });
        worst = rows.iter().copied().fold(worst, f64::max);
    }
    assert!(worst <= 1e-9, "max bound violation = {worst}");
    pass(
        2,
        "product-test bounds",
        format!("k=2 sandwich and k=3,4 upper bounds, max violation {worst:.3e} <= 1e-9"),
    );
}

#[test]
fn a03_counterexample_verifier_and_overlap() {
    let idx = [0, 1, 2, 3];
    let sub = counterexample_subspace(idx, 4);
    let witness = counterexample_state(idx, 4);
    let o = reflection_from_subspace(sub.clone());
    let p = product_test_verifier(&o, &witness)
        .expect("witness shape matches")
        .accept_probability;
    assert!((p - 1.0).abs() < 1e-10, "acceptance {p}");

    let overlap = subspace_max_product_overlap(&sub, 50, 100, Seed(300));
    assert!(
        overlap.value <= 0.75 + 1e-6,
        "product overlap {} exceeds 3/4",
        overlap.value
    );
    assert!(
        overlap.value >= 0.75 - 1e-3,
        "search failed to reach the 3/4 ceiling: {}",
        overlap.value
    );
    pass(
        3,
        "counterexample",
        format!(
            "entangled witness accepted with probability within {:.3e} of 1; best product overlap {:.8} <= 3/4 + 1e-6 over 50 restarts",
            (p - 1.0).abs(),
            overlap.value
        ),
    );
}

#[test]
fn a04_invariant_bases_fixed_and_swap_matrices_frozen() {
    let d = 4;
    let idx = [0, 1, 2, 3];
    let p02 = Permutation::from_cycles(4, &[&[0, 2]]);
    let p13 = Permutation::from_cycles(4, &[&[1, 3]]);
    for kind in [
        FoolingStateKind::Sym4,
        FoolingStateKind::Shape31,
        FoolingStateKind::Shape22Prime,
    ] {
        let nums = g_invariant_numerators(kind, idx, d);
        assert_eq!(permute_numerators(&nums, &p02, d), nums, "{kind:?} not fixed by (02)");
        assert_eq!(permute_numerators(&nums, &p13, d), nums, "{kind:?} not fixed by (13)");
    }

    let t1 = YoungTableau::new(vec![vec![0, 1, 2], vec![3]]).unwrap();
    let t2 = YoungTableau::new(vec![vec![0, 1, 3], vec![2]]).unwrap();
    let t3 = YoungTableau::new(vec![vec![0, 2, 3], vec![1]]).unwrap();
    let basis31 = vec![
        symmetrizer_on_basis(&t1, &[0, 1, 2, 3], d),
        symmetrizer_on_basis(&t2, &[0, 1, 3, 2], d),
        symmetrizer_on_basis(&t3, &[0, 3, 1, 2], d),
    ];
    let m02 = representation_matrix(&basis31, &p02, d).unwrap();
    let m13 = representation_matrix(&basis31, &p13, d).unwrap();
    assert_eq!(m02, vec![vec![1, 0, 0], vec![-1, -1, -1], vec![0, 0, 1]]);
    assert_eq!(m13, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    pass(
        4,
        "fooling bases",
        "three invariant families fixed by both swaps in integer arithmetic; swap matrices on the three-dimensional component match the frozen tables".to_string(),
    );
}

#[test]
fn a05_weingarten_gram_exact_and_twirl_within_3_sigma() {
    for n in 1..=4 {
        for d in [4, 5, 6] {
            assert!(
                gram_identity_holds(n, d).expect("d >= n"),
                "Gram identity failed at n={n}, d={d}"
            );
        }
    }
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        let dim = d * d;
        let mut b = CMatrix::zeros(dim, dim);
        // |0><0| ⊗ |1><1| in the two-register computational basis
        b[(1, 1)] = C64::new(1.0, 0.0);
        let chk = weingarten_average_check(&b, 2, d, 100_000, Seed(500 + d as u64))
            .expect("d >= n");
        assert!(
            chk.within_band,
            "d={d}: residual {} outside 3-sigma band {}",
            chk.residual, chk.band
        );
        worst = worst.max(chk.residual / chk.band);
    }
    pass(
        5,
        "Weingarten algebra",
        format!("Gram identity exact for n <= 4, d in 4..=6; sampled twirl residual at most {worst:.2} of its 3-sigma band at 1e5 samples"),
    );
}

#[test]
fn a06_lu_invariants_depend_only_on_spectrum() {
    let swap = Permutation::from_cycles(2, &[&[0, 1]]);
    let id2 = Permutation::identity(2);
    let mut worst_rot: f64 = 0.0;
    let mut worst_trick: f64 = 0.0;
    for d in [2usize, 3] {
        let psi = haar_state(vec![d, d], Seed(600 + d as u64));
        let audit = spectrum_dependence_audit(&psi, &swap, &id2, 20, Seed(610 + d as u64));
        worst_rot = worst_rot
            .max(audit.max_rotation_deviation)
            .max(audit.max_equal_spectrum_deviation);
        let lu = lu_invariant_state(&swap, &id2, &psi);
        let purity = EntanglementProfile::of(&psi, d, d).purity;
        worst_trick = worst_trick.max((lu - C64::new(purity, 0.0)).norm());
    }
    assert!(worst_rot <= 1e-9, "rotation deviation {worst_rot}");
    assert!(worst_trick <= 1e-10, "swap-trick deviation {worst_trick}");
    pass(
        6,
        "LU invariants",
        format!("20 local rotations move the invariant by at most {worst_rot:.3e} (<= 1e-9); transposition invariant matches purity within {worst_trick:.3e} (<= 1e-10)"),
    );
}

#[test]
fn a07_recurrence_tester_separates_yes_from_far() {
    let (d, t, epsilon) = (4usize, 2u64, 0.5);
    let bits = default_recurrence_bits(t, epsilon);
    let schedule = default_grover_schedule(d);
    let seed = Seed(700);

    let accepted: u64 = exec::map_trials(200, |i| {
        let mut rng = seed.split(i).rng();
        let eigs: Vec<C64> = (0..d)
            .map(|_| {
                if rand::Rng::gen_bool(&mut rng, 0.5) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            })
            .collect();
        let v = haar_unitary(d, seed.split(1_000 + i));
        let o = Oracle::from_spectrum(eigs, Some(v)).expect("Haar basis");
        let r = recurrence_tester(&o, t, epsilon, bits, &schedule, seed.split(2_000 + i))
            .expect("valid parameters");
        (r.decision == Decision::Accept) as u64
    })
    .iter()
    .sum();
    assert_eq!(accepted, 200, "a recurrent instance was rejected");

    let far = vec![
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
    ];
    let rejected: u64 = exec::map_trials(200, |i| {
        let o = Oracle::from_spectrum(far.clone(), None).expect("unit spectrum");
        let r = recurrence_tester(&o, t, epsilon, bits, &schedule, seed.split(3_000 + i))
            .expect("valid parameters");
        (r.decision == Decision::Reject) as u64
    })
    .iter()
    .sum();
    assert!(rejected >= 100, "far instance rejected only {rejected}/200 times");
    pass(
        7,
        "recurrence tester",
        format!("d=4, t=2, eps=0.5: recurrent instances accepted 200/200; far instance rejected {rejected}/200 (>= 100)"),
    );
}

#[test]
fn a08_dimension_estimator_eigenphases_and_accuracy() {
    let (d, w) = (16usize, 2usize);
    let bits = default_dimension_bits(d, w);
    let mut worst_phase: f64 = 0.0;
    for s in [2usize, 4] {
        let o = reflection_from_subspace(Subspace::canonical(d, s));
        let (angle, _) = dimension_block_eigenphases(&o).expect("reflection oracle");
        let expected = 2.0 * (s as f64 / d as f64).sqrt().asin();
        worst_phase = worst_phase.max((angle - expected).abs());
    }
    assert!(worst_phase <= 1e-9, "eigenphase deviation {worst_phase}");

    let o_small = reflection_from_subspace(Subspace::canonical(d, w));
    let o_large = reflection_from_subspace(Subspace::canonical(d, 2 * w));
    let seed = Seed(800);
    let correct: u64 = exec::map_trials(50, |i| {
        let small_ok = dimension_estimator(&o_small, w, bits, seed.split(2 * i))
            .expect("valid parameters")
            .decision
            == Decision::Reject;
        let large_ok = dimension_estimator(&o_large, w, bits, seed.split(2 * i + 1))
            .expect("valid parameters")
            .decision
            == Decision::Accept;
        small_ok as u64 + large_ok as u64
    })
    .iter()
    .sum();
    let accuracy = correct as f64 / 100.0;
    assert!(accuracy >= 0.9, "decision accuracy {accuracy}");
    pass(
        8,
        "dimension estimator",
        format!("block eigenphases match 2 arcsin(sqrt(s/d)) within {worst_phase:.3e} (<= 1e-9); decision accuracy {accuracy:.2} over 100 trials (>= 0.9)"),
    );
}

#[test]
fn a09_polynomial_method_audits() {
    let fit = dimension_polynomial_fit(&MaxEntangledMembership, 12);
    assert!(fit.max_residual <= 1e-8, "fit residual {}", fit.max_residual);

    let membership_spectrum: Vec<C64> = [-1.0, -1.0, 1.0, 1.0, 1.0, 1.0]
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    let rec = RecurrenceAcceptance {
        t: 2,
        epsilon: 0.5,
        bits: default_recurrence_bits(2, 0.5),
        schedule: default_grover_schedule(4),
    };
    let rec_spectrum = vec![
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(1.0, 0.0),
    ];
    let a1 = conjugation_invariance_audit(
        &MaxEntangledMembership,
        &membership_spectrum,
        20,
        None,
        Seed(901),
    )
    .unwrap();
    let a2 = conjugation_invariance_audit(&rec, &rec_spectrum, 20, None, Seed(902)).unwrap();
    let spread = a1.max_spread.max(a2.max_spread);
    assert!(spread <= 1e-9, "conjugation spread {spread}");

    let p_grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let z_grid = [
        C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
        C64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3),
        C64::from_polar(1.0, -2.0 * std::f64::consts::FRAC_PI_3),
        C64::new(-1.0, 0.0),
    ];
    let surface = recurrence_surface(&rec, 4, &p_grid, &z_grid, 100, Seed(903));
    let sym = surface.check_conjugate_symmetry();
    assert!(sym.pairs >= 10, "expected 2 conjugate pairs per p row");
    assert!(sym.ok, "conjugate symmetry ratio {}", sym.max_ratio);
    pass(
        9,
        "polynomial-method audits",
        format!(
            "degree-2 fit residual {:.3e} (<= 1e-8) at d=12; exact conjugation spread {:.3e} (<= 1e-9) over 20 conjugations; 5x5 surface conjugate-symmetric within 3 sigma (worst ratio {:.2})",
            fit.max_residual, spread, sym.max_ratio
        ),
    );
}

#[test]
fn a10_entanglement_functionals() {
    let seed = Seed(1000);
    let violations = exec::map_trials(500, |i| {
        let d1 = 2 + (i % 3) as usize;
        let d2 = 2 + ((i / 3) % 3) as usize;
        let psi = haar_state(vec![d1, d2], seed.split(i));
        let prof = EntanglementProfile::of(&psi, d1, d2);
        let omega = prof.closest_product_overlap;
        (omega * omega - prof.purity).max(prof.purity - omega)
    });
    let worst = violations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-10, "sandwich violation {worst}");

    let mut renyi_dev: f64 = 0.0;
    for r in 1..=8usize {
        let prof = EntanglementProfile::of(&StateVector::max_entangled(r), r, r);
        renyi_dev = renyi_dev.max((prof.renyi2 - (r as f64).log2()).abs());
    }
    assert!(renyi_dev <= 1e-12, "Renyi-2 deviation {renyi_dev}");
    pass(
        10,
        "entanglement functionals",
        format!("omega^2 <= purity <= omega on 500 states (max violation {worst:.3e} <= 1e-10); Renyi-2 of rank-r maximally entangled equals log2 r within {renyi_dev:.3e} for r <= 8"),
    );
}

#[test]
fn a11_wrapped_verifier_soundness() {
    let seed = Seed(1100);
    let inner = |st: &StateVector| {
        product_test_probability(st, 2, 2).expect("two copies of a qubit pair")
    };
    let mut max_excess = f64::NEG_INFINITY;
    for j in 0..10u64 {
        let psi = haar_state(vec![2, 2], seed.split(j));
        let sub = Subspace::new(vec![2, 2], vec![psi.amplitudes().clone()]).unwrap();
        let o = reflection_from_subspace(sub);
        let symmetric = wrapped_qma_verifier(&o, &psi.tensor(&psi), &inner)
            .expect("rank-one oracle")
            .accept_probability;
        let excesses = exec::map_trials(100, |i| {
            wrapped_qma_verifier(
                &o,
                &haar_state(vec![2, 2, 2, 2], seed.split(10_000 + j * 65_536 + i)),
                &inner,
            )
            .expect("proof shape matches")
            .accept_probability
                - symmetric
        });
        max_excess = excesses.iter().copied().fold(max_excess, f64::max);
    }
    assert!(max_excess <= 1e-10, "a proof beat the symmetric proof by {max_excess}");
    pass(
        11,
        "wrapped verifier soundness",
        format!("over 10 rank-one oracles and 100 proofs each, no proof beats the symmetric proof (max excess {max_excess:.3e} <= 1e-10)"),
    );
}
