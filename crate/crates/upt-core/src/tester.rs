//! Verifier circuits evaluated by exact projector algebra, plus a
//! sampled estimator for the product test on systems too large for the
//! dense route.
//!
//! Probabilities labelled exact are computed to floating-point accuracy
//! from the state vector; no measurement sampling is involved unless a
//! function takes a seed.

use crate::entangle::h_k;
use crate::error::{Error, Result};
use crate::exec;
use crate::oracle::{Oracle, OracleBody};
use crate::perm::Permutation;
use crate::rng::Seed;
use crate::state::StateVector;
use crate::util::mean_stderr;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    Reject,
    None,
}

/// Outcome of one verifier run. `accept_probability` is exact unless
/// `stderr` is present, in which case it is a sample mean.
#[derive(Debug, Clone, Serialize)]
pub struct VerifierReport {
    pub tester: String,
    pub params: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub trials: u64,
    pub accept_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub queries_used: u64,
    /// Estimated quantity for testers that output one (the dimension
    /// estimate s̃, for instance).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    pub decision: Decision,
}

impl VerifierReport {
    pub fn exact(tester: &str, params: serde_json::Value, p: f64, queries: u64) -> Self {
        debug_assert!(
            (-1e-10..=1.0 + 1e-10).contains(&p),
            "exact probability out of range: {p}"
        );
        VerifierReport {
            tester: tester.to_string(),
            params,
            seed: None,
            trials: 1,
            accept_probability: p,
            stderr: None,
            queries_used: queries,
            estimate: None,
            decision: Decision::None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Projects onto the subspace behind a reflection oracle: `(I - R)/2`
/// applied to registers `[a, b)`. One query.
fn project_via_oracle(o: &Oracle, state: &StateVector, a: usize, b: usize) -> StateVector {
    let reflected = o.apply(state, a, b, false);
    state.add(&reflected.scale(C64::new(-1.0, 0.0))).scale(C64::new(0.5, 0.0))
}

fn require_reflection(o: &Oracle, who: &str) -> Result<()> {
    match o.body() {
        OracleBody::Reflection { .. } => Ok(()),
        _ => Err(Error::InvalidArgument(format!("{who} needs a reflection oracle"))),
    }
}

/// Subspace membership test: accepts with probability `‖Π proof‖²`.
pub fn membership_test(o: &Oracle, proof: &StateVector) -> Result<VerifierReport> {
    require_reflection(o, "membership_test")?;
    if proof.dim() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "oracle dimension {} vs proof dimension {}",
            o.dim(),
            proof.dim()
        )));
    }
    let q0 = o.queries_used();
    let p = project_via_oracle(o, proof, 0, proof.shape().len()).norm_squared();
    Ok(VerifierReport::exact(
        "membership_test",
        serde_json::json!({ "dim": o.dim() }),
        p,
        o.queries_used() - q0,
    ))
}

/// Swap test across the two registers of `joint`:
/// `<joint| (I + SWAP)/2 |joint>`.
pub fn swap_test(joint: &StateVector) -> Result<VerifierReport> {
    let shape = joint.shape();
    if shape.len() != 2 || shape[0] != shape[1] {
        return Err(Error::InvalidArgument(format!(
            "swap test needs two equal registers, got shape {shape:?}"
        )));
    }
    let swapped = joint.apply_register_permutation(&Permutation::from_cycles(2, &[&[0, 1]]));
    let p = 0.5 * (1.0 + joint.inner(&swapped).re);
    Ok(VerifierReport::exact(
        "swap_test",
        serde_json::json!({ "d": shape[0] }),
        p,
        0,
    ))
}

fn product_test_registers(k: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..k).map(|c| 2 * c).collect(), (0..k).map(|c| 2 * c + 1).collect())
}

fn check_product_test_shape(input: &StateVector, k: usize, d: usize) -> Result<()> {
    if input.shape() != vec![d; 2 * k].as_slice() {
        return Err(Error::InvalidArgument(format!(
            "product test expects shape {:?}, got {:?}",
            vec![d; 2 * k],
            input.shape()
        )));
    }
    Ok(())
}

/// Exact acceptance probability `‖(Π_A ⊗ Π_B) input‖²` of the k-copy
/// product test; registers interleave as A1 B1 .. Ak Bk.
pub fn product_test_probability(input: &StateVector, k: usize, d: usize) -> Result<f64> {
    check_product_test_shape(input, k, d)?;
    let (a_regs, b_regs) = product_test_registers(k);
    Ok(input
        .symmetrize_registers(&a_regs)
        .symmetrize_registers(&b_regs)
        .norm_squared())
}

/// [`product_test_probability`] packaged as a report.
pub fn product_test(input: &StateVector, k: usize, d: usize) -> Result<VerifierReport> {
    let p = product_test_probability(input, k, d)?;
    Ok(VerifierReport::exact(
        "product_test",
        serde_json::json!({ "k": k, "d": d }),
        p,
        0,
    ))
}

/// Unbiased sampled estimate of the product test acceptance: the
/// projector pair is an average of register permutations, so uniformly
/// sampled `(sigma, tau)` overlaps estimate it without dense projectors.
pub fn product_test_sampled(
    input: &StateVector,
    k: usize,
    d: usize,
    trials: u64,
    seed: Seed,
) -> Result<VerifierReport> {
    check_product_test_shape(input, k, d)?;
    assert!(trials >= 2, "need at least two samples for a standard error");
    let (a_regs, b_regs) = product_test_registers(k);
    let perms = Permutation::all(k);
    let samples = exec::map_trials(trials, |i| {
        let mut rng = seed.split(i).rng();
        let sigma = &perms[rng.gen_range(0..perms.len())];
        let tau = &perms[rng.gen_range(0..perms.len())];
        let permuted = input
            .permute_register_subset(&a_regs, sigma)
            .permute_register_subset(&b_regs, tau);
        input.inner(&permuted).re
    });
    let (mean, stderr) = mean_stderr(&samples);
    Ok(VerifierReport {
        tester: "product_test_sampled".to_string(),
        params: serde_json::json!({ "k": k, "d": d }),
        seed: Some(seed.0),
        trials,
        accept_probability: mean,
        stderr: Some(stderr),
        queries_used: 0,
        estimate: None,
        decision: Decision::None,
    })
}

/// Two-copy verifier for membership of a product state: membership on
/// each copy, then the 2-copy product test on the interleaved registers.
/// Both measurements must accept.
pub fn product_test_verifier(o: &Oracle, proof: &StateVector) -> Result<VerifierReport> {
    require_reflection(o, "product_test_verifier")?;
    let shape = proof.shape();
    if shape.len() != 4 || shape[0] != shape[2] || shape[1] != shape[3] {
        return Err(Error::InvalidArgument(format!(
            "proof must cover two copies of a bipartite system, got {shape:?}"
        )));
    }
    if shape[0] * shape[1] != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "oracle dimension {} vs copy dimension {}",
            o.dim(),
            shape[0] * shape[1]
        )));
    }
    let q0 = o.queries_used();
    let after_membership = project_via_oracle(o, &project_via_oracle(o, proof, 0, 2), 2, 4);
    let p = after_membership
        .symmetrize_registers(&[0, 2])
        .symmetrize_registers(&[1, 3])
        .norm_squared();
    Ok(VerifierReport::exact(
        "product_test_verifier",
        serde_json::json!({ "d1": shape[0], "d2": shape[1] }),
        p,
        o.queries_used() - q0,
    ))
}

/// k+1-copy verifier: the k-copy product test on copies 1..k and the
/// membership test on copy k+1. The two act on disjoint registers, so
/// the joint acceptance is a single projector norm.
pub fn symqma_verifier(o: &Oracle, proof: &StateVector, k: usize) -> Result<VerifierReport> {
    require_reflection(o, "symqma_verifier")?;
    let shape = proof.shape();
    if shape.len() != 2 * (k + 1) {
        return Err(Error::InvalidArgument(format!(
            "proof must cover {} copies, got shape {shape:?}",
            k + 1
        )));
    }
    for c in 0..=k {
        if shape[2 * c] != shape[0] || shape[2 * c + 1] != shape[1] {
            return Err(Error::InvalidArgument("copies must have equal shapes".into()));
        }
    }
    if shape[0] * shape[1] != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "oracle dimension {} vs copy dimension {}",
            o.dim(),
            shape[0] * shape[1]
        )));
    }
    let q0 = o.queries_used();
    let a_regs: Vec<usize> = (0..k).map(|c| 2 * c).collect();
    let b_regs: Vec<usize> = (0..k).map(|c| 2 * c + 1).collect();
    let p = project_via_oracle(o, proof, 2 * k, 2 * k + 2)
        .symmetrize_registers(&a_regs)
        .symmetrize_registers(&b_regs)
        .norm_squared();
    Ok(VerifierReport::exact(
        "symqma_verifier",
        serde_json::json!({ "k": k, "d1": shape[0], "d2": shape[1] }),
        p,
        o.queries_used() - q0,
    ))
}

/// Wraps a two-copy verifier for a state `psi` encoded as a rank-one
/// reflection oracle: membership on both copies collapses any accepted
/// proof to `|psi>^{⊗2}`, after which the inner verifier's acceptance
/// applies verbatim. Accepts with probability `|<psi^{⊗2}|proof>|² · s`.
pub fn wrapped_qma_verifier(
    o: &Oracle,
    proof: &StateVector,
    inner: &dyn Fn(&StateVector) -> f64,
) -> Result<VerifierReport> {
    let OracleBody::Reflection { subspace } = o.body() else {
        return Err(Error::InvalidArgument(
            "wrapped_qma_verifier needs a reflection oracle".into(),
        ));
    };
    if subspace.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "oracle must encode a one-dimensional subspace, got dim {}",
            subspace.dim()
        )));
    }
    let psi_shape = subspace.shape().to_vec();
    let shape = proof.shape();
    if shape.len() != 2 * psi_shape.len() || shape[..psi_shape.len()] != psi_shape[..] || shape[psi_shape.len()..] != psi_shape[..] {
        return Err(Error::InvalidArgument(format!(
            "proof shape {shape:?} is not two copies of {psi_shape:?}"
        )));
    }
    let q0 = o.queries_used();
    let r = psi_shape.len();
    let projected = project_via_oracle(o, &project_via_oracle(o, proof, 0, r), r, 2 * r);
    let weight = projected.norm_squared();
    let psi = subspace.basis_states().remove(0);
    let pair_shape: Vec<usize> = psi_shape.iter().chain(psi_shape.iter()).copied().collect();
    let two_copies = StateVector::raw(psi.tensor(&psi).amplitudes().clone(), pair_shape);
    let s = inner(&two_copies);
    Ok(VerifierReport::exact(
        "wrapped_qma_verifier",
        serde_json::json!({ "dim": o.dim() }),
        weight * s,
        o.queries_used() - q0,
    ))
}

/// h_k of the Schmidt spectrum: the closed-form acceptance of the k-copy
/// product test on `|psi>^{⊗k}`.
pub fn product_test_closed_form(psi: &StateVector, k: usize) -> f64 {
    assert_eq!(psi.shape().len(), 2);
    let spec = crate::state::schmidt_spectrum(psi, psi.shape()[0], psi.shape()[1]);
    h_k(&spec, k)
}
