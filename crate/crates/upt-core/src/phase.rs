//! Phase estimation and the two testers built on it: the recurrence-time
//! tester (phase estimation plus amplitude amplification on the bad-phase
//! outcomes) and the subspace dimension estimator (phase estimation of a
//! two-reflection product on its invariant plane).
//!
//! Measurements are simulated by computing the exact outcome
//! distribution, then sampling it with the caller's seed.

use crate::error::{Error, Result};
use crate::oracle::{Oracle, OracleBody};
use crate::rng::Seed;
use crate::state::StateVector;
use crate::tester::{Decision, VerifierReport};
use num_complex::Complex64 as C64;
use rand::Rng;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Squared phase-estimation amplitude for a true eigenphase `theta`
/// (fraction of a turn) at outcome `m` out of `2^bits`:
/// `sin²(pi N delta) / (N² sin²(pi delta))` with `delta = theta - m/N`.
/// Equals 1 when the phase is an exact b-bit fraction.
pub fn pe_kernel(theta: f64, m: u64, bits: u32) -> f64 {
    let n = (1u64 << bits) as f64;
    let delta = theta - m as f64 / n;
    if (delta - delta.round()).abs() < 1e-13 {
        return 1.0;
    }
    let num = (PI * n * delta).sin().powi(2);
    num / (n * n * (PI * delta).sin().powi(2))
}

/// Outcome distribution of textbook phase estimation.
#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    pub bits: u32,
    /// `probabilities[m]` is the chance of reading the estimate `m/2^bits`.
    pub probabilities: Vec<f64>,
    pub queries_used: u64,
}

impl PhaseDistribution {
    pub fn mode(&self) -> usize {
        self.probabilities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty distribution")
    }
}

/// Phase estimation of `o` on `input` with a `bits`-bit phase register:
/// `P(m) = ‖(1/2^b) sum_x e^{-2 pi i x m / 2^b} U^x |input>‖²`.
/// Uses `2^bits - 1` queries.
pub fn phase_estimate(o: &Oracle, input: &StateVector, bits: u32) -> Result<PhaseDistribution> {
    assert!((1..=20).contains(&bits), "phase register of {bits} bits unsupported");
    if input.dim() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "oracle dimension {} vs input dimension {}",
            o.dim(),
            input.dim()
        )));
    }
    let n = 1usize << bits;
    let dim = input.dim();
    let mut powers = Vec::with_capacity(n);
    powers.push(input.amplitudes().clone());
    for x in 1..n {
        let next = o.apply_vec(&powers[x - 1], false);
        powers.push(next);
    }
    o.charge(n as u64 - 1);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut probabilities = vec![0.0; n];
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for j in 0..dim {
        for (x, p) in powers.iter().enumerate() {
            buf[x] = p[j];
        }
        fft.process(&mut buf);
        for m in 0..n {
            probabilities[m] += buf[m].norm_sqr();
        }
    }
    let scale = 1.0 / (n as f64 * n as f64);
    for p in &mut probabilities {
        *p *= scale;
    }
    Ok(PhaseDistribution {
        bits,
        probabilities,
        queries_used: n as u64 - 1,
    })
}

/// Smallest phase register satisfying the `2^-bits <= eps/(8t)` accuracy
/// requirement, plus two guard bits.
pub fn default_recurrence_bits(t: u64, epsilon: f64) -> u32 {
    (8.0 * t as f64 / epsilon).log2().ceil() as u32 + 2
}

/// Amplification schedule halving the assumed marked count from `d` down
/// to 1: `ceil(sqrt(d / 2^i))` iterations at stage `i`.
pub fn default_grover_schedule(d: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut assumed = d as f64;
    while assumed >= 1.0 {
        out.push((d as f64 / assumed).sqrt().ceil() as u64);
        assumed /= 2.0;
    }
    out
}

fn sample_categorical(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Tests whether `U^t` is (within `epsilon`) the identity. Phase
/// estimation runs on the maximally entangled input, which carries
/// weight `1/d` on every eigenvector regardless of the eigenbasis, so
/// the simulation needs only the oracle's eigenphases. Estimates `m`
/// with `|e^{2 pi i t m/2^b} - 1| >= eps/2` are marked bad; each stage of
/// the schedule amplitude-amplifies the bad outcomes from a fresh
/// preparation and measures. Rejects iff any stage observes a bad phase;
/// when all phases of a recurrent instance are exact `b`-bit fractions
/// the bad outcomes carry zero weight and every seed accepts.
pub fn recurrence_tester(
    o: &Oracle,
    t: u64,
    epsilon: f64,
    bits: u32,
    schedule: &[u64],
    seed: Seed,
) -> Result<VerifierReport> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let n = 1u64 << bits;
    if (n as f64) * epsilon < 8.0 * t as f64 {
        return Err(Error::InvalidArgument(format!(
            "{bits} bits resolve only 1/{n} of a turn; need 2^bits >= 8t/eps = {}",
            8.0 * t as f64 / epsilon
        )));
    }
    assert!(!schedule.is_empty(), "empty amplification schedule");
    let d = o.dim();
    let phases = o.eigenphases();

    let bad: Vec<bool> = (0..n)
        .map(|m| {
            let angle = 2.0 * PI * ((t % n) * m % n) as f64 / n as f64;
            2.0 * (angle / 2.0).sin().abs() >= epsilon / 2.0
        })
        .collect();
    let mut p_marked = 0.0;
    for &theta in &phases {
        for m in 0..n {
            if bad[m as usize] {
                p_marked += pe_kernel(theta, m, bits);
            }
        }
    }
    p_marked = (p_marked / d as f64).clamp(0.0, 1.0);
    let eta = p_marked.sqrt().asin();

    // exact acceptance probability of the full procedure
    let mut accept_probability = 1.0;
    for &r in schedule {
        accept_probability *= 1.0 - ((2 * r + 1) as f64 * eta).sin().powi(2);
    }

    let mut rng = seed.rng();
    let mut queries = 0u64;
    let mut decision = Decision::Accept;
    for &r in schedule {
        queries += (n - 1) * (1 + 2 * r);
        let hit = ((2 * r + 1) as f64 * eta).sin().powi(2);
        if rng.gen::<f64>() < hit {
            decision = Decision::Reject;
            break;
        }
    }
    o.charge(queries);

    Ok(VerifierReport {
        tester: "recurrence_tester".to_string(),
        params: serde_json::json!({
            "d": d, "t": t, "epsilon": epsilon, "bits": bits, "schedule": schedule,
        }),
        seed: Some(seed.0),
        trials: 1,
        accept_probability,
        stderr: None,
        queries_used: queries,
        estimate: Some(p_marked),
        decision,
    })
}

fn require_reflection(o: &Oracle) -> Result<()> {
    match o.body() {
        OracleBody::Reflection { .. } => Ok(()),
        _ => Err(Error::InvalidArgument(
            "dimension estimation needs a reflection oracle".into(),
        )),
    }
}

/// Numerically computed eigenphases (radians, `+phi` and `-phi`) of
/// `G = R_Phi (U ⊗ I)` on the invariant plane through the maximally
/// entangled state `Phi`; `R_Phi = 2|Phi><Phi| - I`. For a reflection
/// about an s-dimensional subspace of `C^d` these are `±2 arcsin
/// sqrt(s/d)`. One query.
pub fn dimension_block_eigenphases(o: &Oracle) -> Result<(f64, f64)> {
    require_reflection(o)?;
    let d = o.dim();
    let phi = StateVector::max_entangled(d);
    let v = o.apply(&phi, 0, 1, false);
    let c = phi.inner(&v);
    debug_assert!(c.im.abs() < 1e-12, "reflection overlap must be real");
    let residual = v.add(&phi.scale(-c)).norm();
    let angle = residual.atan2(c.re);
    Ok((angle, -angle))
}

/// Default phase register for the dimension decision at gap `w` vs `2w`.
pub fn default_dimension_bits(d: usize, w: usize) -> u32 {
    ((d as f64 / w as f64).sqrt().log2().ceil() as u32) + 6
}

/// Distinguishes `dim S >= 2w` from `dim S <= w` by phase-estimating `G`
/// on `|Phi>`, folding the estimate to `theta_hat` and converting to
/// `s_hat = d sin² theta_hat`; decides `>= 2w` (reported as accept) iff
/// `s_hat >= 1.5 w`. `accept_probability` is the exact chance of that
/// decision; `decision` is one seeded sample from it.
pub fn dimension_estimator(o: &Oracle, w: usize, bits: u32, seed: Seed) -> Result<VerifierReport> {
    require_reflection(o)?;
    let d = o.dim();
    if w < 1 || 2 * w > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= w <= d/2, got w = {w}, d = {d}"
        )));
    }
    assert!((1..=24).contains(&bits));
    let q0 = o.queries_used();
    let (plus, _) = dimension_block_eigenphases(o)?;
    // |Phi> splits evenly across the two conjugate eigenvectors
    let fracs: Vec<(f64, f64)> = if plus.abs() < 1e-12 || (plus - PI).abs() < 1e-12 {
        vec![(plus / (2.0 * PI), 1.0)]
    } else {
        let f = plus / (2.0 * PI);
        vec![(f, 0.5), (1.0 - f, 0.5)]
    };
    let n = 1u64 << bits;
    let weights: Vec<f64> = (0..n)
        .map(|m| fracs.iter().map(|&(f, w)| w * pe_kernel(f, m, bits)).sum())
        .collect();

    let s_hat_of = |m: u64| -> f64 {
        let frac = m as f64 / n as f64;
        let folded = frac.min(1.0 - frac);
        let theta = PI * folded;
        d as f64 * theta.sin().powi(2)
    };
    let threshold = 1.5 * w as f64;
    let accept_probability: f64 = (0..n)
        .filter(|&m| s_hat_of(m) >= threshold)
        .map(|m| weights[m as usize])
        .sum::<f64>()
        .clamp(0.0, 1.0);

    let mut rng = seed.rng();
    let m = sample_categorical(&weights, &mut rng) as u64;
    let s_hat = s_hat_of(m);
    let decision = if s_hat >= threshold { Decision::Accept } else { Decision::Reject };
    o.charge(n - 2); // the block computation already used one query
    Ok(VerifierReport {
        tester: "dimension_estimator".to_string(),
        params: serde_json::json!({ "d": d, "w": w, "bits": bits }),
        seed: Some(seed.0),
        trials: 1,
        accept_probability,
        stderr: None,
        queries_used: o.queries_used() - q0,
        estimate: Some(s_hat),
        decision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{haar_subspace, haar_unitary};
    use crate::oracle::reflection_from_subspace;
    use crate::rng::Seed;
    use crate::subspace::Subspace;

    #[test]
    fn kernel_is_a_distribution() {
        for &theta in &[0.0, 0.3714, 0.5, 0.999] {
            let total: f64 = (0..32).map(|m| pe_kernel(theta, m, 5)).sum();
            assert!((total - 1.0).abs() < 1e-12, "theta {theta}: {total}");
        }
        assert!((pe_kernel(0.25, 8, 5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_oracle_estimates_zero_phase() {
        let o = Oracle::identity(4);
        let input = StateVector::uniform(vec![4]);
        let dist = phase_estimate(&o, &input, 3).unwrap();
        assert!((dist.probabilities[0] - 1.0).abs() < 1e-12);
        assert_eq!(dist.queries_used, 7);
        assert_eq!(o.queries_used(), 7);
    }

    #[test]
    fn binary_phase_is_exact() {
        let o = Oracle::from_spectrum(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)], None).unwrap();
        let input = StateVector::basis_state(vec![2], &[1]);
        let dist = phase_estimate(&o, &input, 3).unwrap();
        assert!((dist.probabilities[4] - 1.0).abs() < 1e-12);
        assert_eq!(dist.mode(), 4);
    }

    #[test]
    fn third_of_a_turn_concentrates_near_five_sixteenths() {
        let z = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let o = Oracle::from_spectrum(vec![C64::new(1.0, 0.0), z], None).unwrap();
        let input = StateVector::basis_state(vec![2], &[1]);
        let dist = phase_estimate(&o, &input, 4).unwrap();
        assert_eq!(dist.mode(), 5, "nearest 4-bit fraction to 1/3");
        assert!(dist.probabilities[5] >= 4.0 / (PI * PI));
        let total: f64 = dist.probabilities.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn distribution_matches_kernel_for_eigenvector_input() {
        let theta = 0.2173;
        let z = C64::from_polar(1.0, 2.0 * PI * theta);
        let o = Oracle::from_spectrum(vec![z, C64::new(1.0, 0.0)], None).unwrap();
        let input = StateVector::basis_state(vec![2], &[0]);
        let dist = phase_estimate(&o, &input, 5).unwrap();
        for m in 0..32u64 {
            let expect = pe_kernel(theta, m, 5);
            assert!((dist.probabilities[m as usize] - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn default_parameters_match_worked_case() {
        assert_eq!(default_recurrence_bits(2, 0.5), 7);
        assert_eq!(default_grover_schedule(4), vec![1, 2, 2]);
    }

    #[test]
    fn recurrence_accepts_recurrent_instances_on_every_seed() {
        // U² = I with a non-trivial eigenbasis: phases stay exact
        let basis = haar_unitary(4, Seed(600));
        let evs = vec![
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
        ];
        let o = Oracle::from_spectrum(evs, Some(basis)).unwrap();
        let bits = default_recurrence_bits(2, 0.5);
        let schedule = default_grover_schedule(4);
        for trial in 0..50u64 {
            let r = recurrence_tester(&o, 2, 0.5, bits, &schedule, Seed(601).split(trial)).unwrap();
            assert_eq!(r.decision, Decision::Accept, "trial {trial}");
            assert!((r.accept_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_rejects_quarter_phase_instance() {
        let o = Oracle::from_spectrum(
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
            ],
            None,
        )
        .unwrap();
        let bits = default_recurrence_bits(2, 0.5);
        let schedule = default_grover_schedule(4);
        let mut rejects = 0;
        for trial in 0..50u64 {
            let r = recurrence_tester(&o, 2, 0.5, bits, &schedule, Seed(602).split(trial)).unwrap();
            if r.decision == Decision::Reject {
                rejects += 1;
            }
            // marked weight is exactly 1/4, and the last stage amplifies
            // it to certainty: sin²(3 arcsin(1/2)) = 1
            assert!((r.estimate.unwrap() - 0.25).abs() < 1e-12);
            assert!(r.accept_probability < 1e-12);
        }
        assert_eq!(rejects, 50);
    }

    #[test]
    fn recurrence_validates_parameters() {
        let o = Oracle::identity(2);
        assert!(recurrence_tester(&o, 1, 0.0, 8, &[1], Seed(0)).is_err());
        assert!(recurrence_tester(&o, 1, 1.5, 8, &[1], Seed(0)).is_err());
        // 8t/eps = 16 needs at least 4 bits
        assert!(recurrence_tester(&o, 1, 0.5, 3, &[1], Seed(0)).is_err());
        let ok = recurrence_tester(&o, 1, 0.5, 4, &[1], Seed(0)).unwrap();
        assert_eq!(ok.decision, Decision::Accept);
        assert_eq!(ok.queries_used, 15 * 3);
        assert_eq!(o.queries_used(), 45);
    }

    #[test]
    fn block_eigenphases_match_closed_form() {
        let d = 16;
        for s in [2usize, 4] {
            let sub = haar_subspace(vec![d], s, Seed(610 + s as u64));
            let o = reflection_from_subspace(sub);
            let (plus, minus) = dimension_block_eigenphases(&o).unwrap();
            let expect = 2.0 * ((s as f64 / d as f64).sqrt()).asin();
            assert!((plus - expect).abs() < 1e-9, "s = {s}: {plus} vs {expect}");
            assert!((plus + minus).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_estimator_separates_two_and_four() {
        let d = 16;
        let w = 2;
        let bits = default_dimension_bits(d, w);
        assert_eq!(bits, 8);
        for (s, want) in [(2usize, Decision::Reject), (4, Decision::Accept)] {
            let sub = haar_subspace(vec![d], s, Seed(620 + s as u64));
            let o = reflection_from_subspace(sub);
            let mut correct = 0;
            for trial in 0..20u64 {
                let r = dimension_estimator(&o, w, bits, Seed(630).split(trial)).unwrap();
                if r.decision == want {
                    correct += 1;
                }
                assert_eq!(r.queries_used, (1 << bits) - 1);
                o.reset_queries();
            }
            assert!(correct >= 17, "s = {s}: only {correct}/20 correct");
        }
    }

    #[test]
    fn empty_subspace_always_decides_small() {
        let d = 8;
        let sub = Subspace::new(vec![d], Vec::new()).unwrap();
        let o = reflection_from_subspace(sub);
        for trial in 0..10u64 {
            let r = dimension_estimator(&o, 2, 6, Seed(640).split(trial)).unwrap();
            assert_eq!(r.decision, Decision::Reject);
            assert!(r.estimate.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_estimator_validates_w() {
        let sub = haar_subspace(vec![8], 2, Seed(650));
        let o = reflection_from_subspace(sub);
        assert!(dimension_estimator(&o, 0, 6, Seed(0)).is_err());
        assert!(dimension_estimator(&o, 5, 6, Seed(0)).is_err());
    }
}
