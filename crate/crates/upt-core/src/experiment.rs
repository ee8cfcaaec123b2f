//! Named, seeded, reproducible experiments. Each registered experiment
//! bundles the checks for one headline property of the library and
//! emits a versioned JSON report; the runner exit status is derived
//! from the report by the CLI.

use crate::audit::{
    conjugation_invariance_audit, dimension_polynomial_fit, recurrence_surface,
    MaxEntangledMembership, RecurrenceAcceptance,
};
use crate::entangle::{
    closest_product_overlap, product_test_lower_bound_k2, product_test_upper_bound,
    subspace_max_product_overlap, EntanglementProfile,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::fooling::{
    counterexample_state, counterexample_subspace, g_invariant_numerators, permute_numerators,
    representation_matrix, symmetrizer_on_basis, FoolingStateKind, YoungTableau,
};
use crate::haar::{haar_state, haar_unitary};
use crate::invariant::{
    gram_identity_holds, lu_invariant_state, spectrum_dependence_audit, weingarten_average_check,
};
use crate::oracle::{reflection_from_subspace, Oracle};
use crate::perm::Permutation;
use crate::phase::{
    default_dimension_bits, default_grover_schedule, default_recurrence_bits,
    dimension_block_eigenphases, dimension_estimator, recurrence_tester,
};
use crate::rng::Seed;
use crate::state::StateVector;
use crate::subspace::Subspace;
use crate::tester::{
    product_test_closed_form, product_test_probability, product_test_sampled,
    product_test_verifier, wrapped_qma_verifier, Decision,
};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Exact,
    Sampled,
}

/// A fully specified experiment invocation.
#[derive(Debug, Clone)]
pub struct ExperimentDescriptor {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    /// Overrides the experiment's default trial count.
    pub trials: Option<u64>,
    pub mode: RunMode,
    /// Where the CLI writes the report; ignored by the library runner.
    pub out_path: Option<String>,
}

impl ExperimentDescriptor {
    pub fn new(name: &str, seed: u64) -> Self {
        ExperimentDescriptor {
            name: name.to_string(),
            params: BTreeMap::new(),
            seed,
            trials: None,
            mode: RunMode::Exact,
            out_path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Plain statement of the property this check certifies.
    pub claim: String,
    /// How `observed` relates to `bound` when the check passes.
    pub op: String,
    pub observed: f64,
    pub bound: f64,
    pub passed: bool,
}

fn check_le(name: &str, claim: &str, observed: f64, bound: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        claim: claim.into(),
        op: "<=".into(),
        observed,
        bound,
        passed: observed <= bound,
    }
}

fn check_ge(name: &str, claim: &str, observed: f64, bound: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        claim: claim.into(),
        op: ">=".into(),
        observed,
        bound,
        passed: observed >= bound,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema: &'static str,
    pub experiment: String,
    pub version: &'static str,
    pub seed: u64,
    pub trials: u64,
    /// Resolved parameters, defaults included.
    pub params: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<CheckResult>,
    /// CSV payloads for external plotting, keyed by table name.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Typed access to the raw string parameters; every read records the
/// resolved value for the report.
struct Params<'a> {
    raw: &'a BTreeMap<String, String>,
    resolved: RefCell<BTreeMap<String, serde_json::Value>>,
}

impl<'a> Params<'a> {
    fn new(raw: &'a BTreeMap<String, String>) -> Self {
        Params {
            raw,
            resolved: RefCell::new(BTreeMap::new()),
        }
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidArgument(format!("parameter {key}: cannot parse {v:?}"))
            }),
        }
    }

    fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        let v = self.parse::<usize>(key)?.unwrap_or(default);
        self.resolved
            .borrow_mut()
            .insert(key.into(), serde_json::Value::from(v));
        Ok(v)
    }

    fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        let v = self.parse::<u64>(key)?.unwrap_or(default);
        self.resolved
            .borrow_mut()
            .insert(key.into(), serde_json::Value::from(v));
        Ok(v)
    }

    fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.parse::<f64>(key)?.unwrap_or(default);
        self.resolved
            .borrow_mut()
            .insert(key.into(), serde_json::Value::from(v));
        Ok(v)
    }

    fn into_resolved(self) -> BTreeMap<String, serde_json::Value> {
        self.resolved.into_inner()
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

struct Outcome {
    checks: Vec<CheckResult>,
    tables: BTreeMap<String, String>,
}

impl Outcome {
    fn checks(checks: Vec<CheckResult>) -> Self {
        Outcome {
            checks,
            tables: BTreeMap::new(),
        }
    }
}

struct Entry {
    name: &'static str,
    summary: &'static str,
    /// `(key, help)` pairs; help states the default.
    params: &'static [(&'static str, &'static str)],
    /// What one trial means is experiment-specific; see `summary`.
    default_trials: u64,
    run: fn(&Params, Seed, u64, RunMode) -> Result<Outcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamInfo {
    pub key: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub default_trials: u64,
    pub params: Vec<ParamInfo>,
}

/// Alphabetized registry listing with parameter schemas.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    REGISTRY
        .iter()
        .map(|e| ExperimentInfo {
            name: e.name,
            summary: e.summary,
            default_trials: e.default_trials,
            params: e
                .params
                .iter()
                .map(|&(key, help)| ParamInfo { key, help })
                .collect(),
        })
        .collect()
}

/// Runs a registered experiment. Errors with `UnknownExperiment` or
/// `InvalidArgument` before any computation; an unfavorable numeric
/// outcome is a failed check in the report, not an error.
pub fn run_experiment(desc: &ExperimentDescriptor) -> Result<ExperimentReport> {
    let entry = REGISTRY
        .iter()
        .find(|e| e.name == desc.name)
        .ok_or_else(|| Error::UnknownExperiment(desc.name.clone()))?;
    for key in desc.params.keys() {
        if !entry.params.iter().any(|&(k, _)| k == key) {
            return Err(invalid(format!(
                "experiment {} has no parameter {key:?}",
                entry.name
            )));
        }
    }
    let trials = desc.trials.unwrap_or(entry.default_trials);
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let params = Params::new(&desc.params);
    let outcome = (entry.run)(&params, Seed(desc.seed), trials, desc.mode)?;
    let passed = outcome.checks.iter().all(|c| c.passed);
    Ok(ExperimentReport {
        schema: "v1",
        experiment: entry.name.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        seed: desc.seed,
        trials,
        params: params.into_resolved(),
        checks: outcome.checks,
        tables: outcome.tables,
        passed,
    })
}

static REGISTRY: &[Entry] = &[
    Entry {
        name: "counterexample",
        summary: "Two-copy product-test verifier on the six-dimensional witness subspace: \
                  an entangled proof is accepted with certainty while every product state \
                  keeps squared overlap at most 3/4 with the subspace. Trials = search restarts.",
        params: &[
            ("d", "single-register dimension, 4..=6 (default 4)"),
            ("iters", "alternating-search iterations per restart, >= 10 (default 100)"),
        ],
        default_trials: 50,
        run: run_counterexample,
    },
    Entry {
        name: "dimension-estimator",
        summary: "Phase-estimation dimension estimator on canonical subspaces: block \
                  eigenphases match 2 arcsin(sqrt(s/d)) and the accept/reject decision \
                  separates s = w from s = 2w. Trials = decision runs.",
        params: &[
            ("d", "ambient dimension, >= 4 (default 16)"),
            ("w", "width parameter, 1 <= w <= d/2 (default 2)"),
            ("s_small", "subspace dimension of the small instance, <= w (default 2)"),
            ("s_large", "subspace dimension of the large instance, >= 2w (default 4)"),
            ("bits", "phase-estimation bits, 0 = automatic (default 0)"),
        ],
        default_trials: 100,
        run: run_dimension_estimator,
    },
    Entry {
        name: "entanglement-functionals",
        summary: "Schmidt-spectrum functionals on random bipartite states: omega^2 <= \
                  purity <= omega, and the Renyi-2 entropy of a rank-r maximally \
                  entangled state equals log2 r. Trials = random states.",
        params: &[("max_rank", "largest maximally entangled rank checked, 1..=12 (default 8)")],
        default_trials: 500,
        run: run_entanglement,
    },
    Entry {
        name: "fooling-basis",
        summary: "Exact integer fixedness of the three invariant four-register state \
                  families under both register swaps, plus the frozen integer swap \
                  representation matrices. Trials are unused.",
        params: &[("d", "single-register dimension, 4..=6 (default 4)")],
        default_trials: 1,
        run: run_fooling,
    },
    Entry {
        name: "lu-invariants",
        summary: "Cycle-trace invariants of bipartite pure states: invariance under \
                  local rotations and under rebuilding the state from its Schmidt \
                  spectrum, and the transposition invariant equals the purity. \
                  Trials = rotations per dimension.",
        params: &[],
        default_trials: 20,
        run: run_lu_invariants,
    },
    Entry {
        name: "polymethod-audits",
        summary: "Polynomial structure of query testers: degree-two fit of acceptance \
                  versus subspace dimension, invariance of acceptance under Haar \
                  conjugation of the spectrum, and conjugation symmetry of the \
                  recurrence acceptance surface. Trials = samples per surface cell.",
        params: &[
            ("fit_d", "ambient dimension for the polynomial fit, 2..=12 (default 12)"),
            ("conjugations", "Haar conjugations per audit, >= 2 (default 20)"),
        ],
        default_trials: 100,
        run: run_polymethod,
    },
    Entry {
        name: "product-test-bounds",
        summary: "Closed-form product-test acceptance against its bounds in the closest \
                  product overlap: the two-copy sandwich and the k-copy upper bound for \
                  k = 3, 4, over d in {2,3,4}. Trials = states per dimension.",
        params: &[],
        default_trials: 100,
        run: run_product_test_bounds,
    },
    Entry {
        name: "product-test-exactness",
        summary: "Simulated k-copy product-test acceptance against the complete \
                  homogeneous symmetric polynomial of the Schmidt spectrum; sampled \
                  mode checks the unbiased estimator instead. Trials = random states.",
        params: &[
            ("d", "single-register dimension, 2..=4 (default 3)"),
            ("k", "number of copies, 2..=4 (default 3)"),
        ],
        default_trials: 100,
        run: run_product_test_exactness,
    },
    Entry {
        name: "recurrence-tester",
        summary: "Amplitude-amplified recurrence tester: instances with U^t = I are \
                  accepted on every run; a far instance with one planted phase is \
                  rejected on at least half of the runs. Trials = runs per instance.",
        params: &[
            ("d", "oracle dimension, 2..=8 (default 4)"),
            ("t", "recurrence time (default 2)"),
            ("epsilon", "distance parameter in (0, 1] (default 0.5)"),
        ],
        default_trials: 200,
        run: run_recurrence,
    },
    Entry {
        name: "weingarten",
        summary: "Weingarten matrix inverts the permutation Gram matrix in exact \
                  rational arithmetic for n <= n_max, d in {4,5,6}; the sampled \
                  two-fold twirl matches the exact formula within three sigma for \
                  d in {2,3}. Trials = Monte Carlo samples.",
        params: &[("n_max", "largest tensor power for the exact identity, 1..=5 (default 4)")],
        default_trials: 100_000,
        run: run_weingarten,
    },
    Entry {
        name: "wrapped-verifier",
        summary: "Rank-one wrapped verifier: across random rank-one reflection oracles \
                  on two qubit pairs, no proof is accepted with higher probability than \
                  the symmetric two-copy proof. Trials = proofs per oracle.",
        params: &[("oracles", "random oracles checked, 1..=50 (default 10)")],
        default_trials: 100,
        run: run_wrapped,
    },
];

fn run_counterexample(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let d = p.get_usize("d", 4)?;
    let iters = p.get_usize("iters", 100)?;
    if !(4..=6).contains(&d) {
        return Err(invalid("d must be in 4..=6"));
    }
    if iters < 10 {
        return Err(invalid("iters must be at least 10"));
    }
    let idx = [0, 1, 2, 3];
    let sub = counterexample_subspace(idx, d);
    let witness = counterexample_state(idx, d);
    let o = reflection_from_subspace(sub.clone());
    let report = product_test_verifier(&o, &witness)?;
    let overlap = subspace_max_product_overlap(&sub, trials as usize, iters, seed);
    Ok(Outcome::checks(vec![
        check_le(
            "verifier-acceptance",
            "the verifier accepts the entangled witness with certainty",
            (report.accept_probability - 1.0).abs(),
            1e-10,
        ),
        check_le(
            "product-overlap",
            "no product state has squared overlap above 3/4 with the subspace",
            overlap.value,
            0.75 + 1e-6,
        ),
    ]))
}

fn run_dimension_estimator(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let d = p.get_usize("d", 16)?;
    let w = p.get_usize("w", 2)?;
    let s_small = p.get_usize("s_small", 2)?;
    let s_large = p.get_usize("s_large", 4)?;
    let bits_param = p.get_u64("bits", 0)? as u32;
    if d < 4 || w < 1 || 2 * w > d {
        return Err(invalid("need d >= 4 and 1 <= w <= d/2"));
    }
    if s_small == 0 || s_small > w || s_large < 2 * w || 2 * s_large > d {
        return Err(invalid("need 1 <= s_small <= w and 2w <= s_large <= d/2"));
    }
    let bits = if bits_param == 0 {
        default_dimension_bits(d, w)
    } else {
        bits_param
    };
    let o_small = reflection_from_subspace(Subspace::canonical(d, s_small));
    let o_large = reflection_from_subspace(Subspace::canonical(d, s_large));

    let mut checks = Vec::new();
    for (name, o, s) in [
        ("eigenphase-small", &o_small, s_small),
        ("eigenphase-large", &o_large, s_large),
    ] {
        let (angle, _) = dimension_block_eigenphases(o)?;
        let expected = 2.0 * (s as f64 / d as f64).sqrt().asin();
        checks.push(check_le(
            name,
            "the invariant-plane eigenphase equals 2 arcsin(sqrt(s/d))",
            (angle - expected).abs(),
            1e-9,
        ));
    }

    let half = (trials / 2).max(1);
    let correct: u64 = exec::map_trials(half, |i| {
        let small_ok =
            dimension_estimator(&o_small, w, bits, seed.split(2 * i)).expect("validated").decision
                == Decision::Reject;
        let large_ok =
            dimension_estimator(&o_large, w, bits, seed.split(2 * i + 1)).expect("validated").decision
                == Decision::Accept;
        small_ok as u64 + large_ok as u64
    })
    .iter()
    .sum();
    checks.push(check_ge(
        "decision-accuracy",
        "the estimator separates the small and large instances with accuracy at least 0.9",
        correct as f64 / (2 * half) as f64,
        0.9,
    ));
    Ok(Outcome::checks(checks))
}

fn run_entanglement(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let max_rank = p.get_usize("max_rank", 8)?;
    if !(1..=12).contains(&max_rank) {
        return Err(invalid("max_rank must be in 1..=12"));
    }
    let violations = exec::map_trials(trials, |i| {
        let d1 = 2 + (i % 3) as usize;
        let d2 = 2 + ((i / 3) % 3) as usize;
        let psi = haar_state(vec![d1, d2], seed.split(i));
        let prof = EntanglementProfile::of(&psi, d1, d2);
        let omega = prof.closest_product_overlap;
        (omega * omega - prof.purity).max(prof.purity - omega)
    });
    let worst = violations.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut renyi_dev: f64 = 0.0;
    for r in 1..=max_rank {
        let psi = StateVector::max_entangled(r);
        let prof = EntanglementProfile::of(&psi, r, r);
        renyi_dev = renyi_dev.max((prof.renyi2 - (r as f64).log2()).abs());
    }
    Ok(Outcome::checks(vec![
        check_le(
            "purity-sandwich",
            "omega^2 <= purity <= omega for random bipartite states",
            worst,
            1e-10,
        ),
        check_le(
            "renyi-max-entangled",
            "the Renyi-2 entropy of a rank-r maximally entangled state equals log2 r",
            renyi_dev,
            1e-12,
        ),
    ]))
}

fn run_fooling(p: &Params, _seed: Seed, _trials: u64, _mode: RunMode) -> Result<Outcome> {
    let d = p.get_usize("d", 4)?;
    if !(4..=6).contains(&d) {
        return Err(invalid("d must be in 4..=6"));
    }
    let idx = [0, 1, 2, 3];
    let p02 = Permutation::from_cycles(4, &[&[0, 2]]);
    let p13 = Permutation::from_cycles(4, &[&[1, 3]]);

    let mut unfixed = 0u64;
    for kind in [
        FoolingStateKind::Sym4,
        FoolingStateKind::Shape31,
        FoolingStateKind::Shape22Prime,
    ] {
        let nums = g_invariant_numerators(kind, idx, d);
        if permute_numerators(&nums, &p02, d) != nums {
            unfixed += 1;
        }
        if permute_numerators(&nums, &p13, d) != nums {
            unfixed += 1;
        }
    }

    let t1 = YoungTableau::new(vec![vec![0, 1, 2], vec![3]]).expect("valid tableau");
    let t2 = YoungTableau::new(vec![vec![0, 1, 3], vec![2]]).expect("valid tableau");
    let t3 = YoungTableau::new(vec![vec![0, 2, 3], vec![1]]).expect("valid tableau");
    let basis31 = vec![
        symmetrizer_on_basis(&t1, &[0, 1, 2, 3], d),
        symmetrizer_on_basis(&t2, &[0, 1, 3, 2], d),
        symmetrizer_on_basis(&t3, &[0, 3, 1, 2], d),
    ];
    let s1 = YoungTableau::new(vec![vec![0, 1], vec![2, 3]]).expect("valid tableau");
    let s2 = YoungTableau::new(vec![vec![0, 2], vec![1, 3]]).expect("valid tableau");
    let basis22 = vec![
        symmetrizer_on_basis(&s1, &[0, 1, 2, 3], d),
        symmetrizer_on_basis(&s2, &[0, 2, 1, 3], d),
    ];
    let mut mismatches = 0u64;
    let expect31_02 = vec![vec![1, 0, 0], vec![-1, -1, -1], vec![0, 0, 1]];
    let expect31_13 = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
    let expect22 = vec![vec![-1, -1], vec![0, 1]];
    for (basis, sigma, expect) in [
        (&basis31, &p02, &expect31_02),
        (&basis31, &p13, &expect31_13),
        (&basis22, &p02, &expect22),
        (&basis22, &p13, &expect22),
    ] {
        match representation_matrix(basis, sigma, d) {
            Some(m) if &m == expect => {}
            _ => mismatches += 1,
        }
    }

    Ok(Outcome::checks(vec![
        check_le(
            "swap-fixedness",
            "each invariant state is fixed by both register swaps in integer arithmetic",
            unfixed as f64,
            0.5,
        ),
        check_le(
            "representation-matrices",
            "swap actions on the invariant bases match the frozen integer tables",
            mismatches as f64,
            0.5,
        ),
    ]))
}

fn run_lu_invariants(_p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let swap = Permutation::from_cycles(2, &[&[0, 1]]);
    let id2 = Permutation::identity(2);
    let mut max_rot: f64 = 0.0;
    let mut max_trick: f64 = 0.0;
    for (j, d) in [2usize, 3].into_iter().enumerate() {
        let psi = haar_state(vec![d, d], seed.split(j as u64));
        let audit = spectrum_dependence_audit(&psi, &swap, &id2, trials as usize, seed.split(10 + j as u64));
        max_rot = max_rot
            .max(audit.max_rotation_deviation)
            .max(audit.max_equal_spectrum_deviation);
        let lu = lu_invariant_state(&swap, &id2, &psi);
        let purity = EntanglementProfile::of(&psi, d, d).purity;
        max_trick = max_trick.max((lu - C64::new(purity, 0.0)).norm());
    }
    Ok(Outcome::checks(vec![
        check_le(
            "rotation-invariance",
            "cycle invariants depend only on the Schmidt spectrum",
            max_rot,
            1e-9,
        ),
        check_le(
            "swap-trick",
            "the transposition invariant equals the purity of the reduced state",
            max_trick,
            1e-10,
        ),
    ]))
}

fn run_polymethod(p: &Params, seed: Seed, trials: u64, mode: RunMode) -> Result<Outcome> {
    let fit_d = p.get_usize("fit_d", 12)?;
    let conjugations = p.get_usize("conjugations", 20)?;
    if !(2..=12).contains(&fit_d) {
        return Err(invalid("fit_d must be in 2..=12"));
    }
    if conjugations < 2 {
        return Err(invalid("conjugations must be at least 2"));
    }

    let fit = dimension_polynomial_fit(&MaxEntangledMembership, fit_d);
    let mut checks = vec![check_le(
        "dimension-fit",
        "acceptance versus subspace dimension fits a polynomial of degree two",
        fit.max_residual,
        1e-8,
    )];

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
    match mode {
        RunMode::Exact => {
            let a1 = conjugation_invariance_audit(
                &MaxEntangledMembership,
                &membership_spectrum,
                conjugations,
                None,
                seed.split(1),
            )?;
            let a2 =
                conjugation_invariance_audit(&rec, &rec_spectrum, conjugations, None, seed.split(2))?;
            checks.push(check_le(
                "conjugation-spread",
                "acceptance is unchanged under Haar conjugation of the spectrum",
                a1.max_spread.max(a2.max_spread),
                1e-9,
            ));
        }
        RunMode::Sampled => {
            let a1 = conjugation_invariance_audit(
                &MaxEntangledMembership,
                &membership_spectrum,
                conjugations,
                Some(200),
                seed.split(1),
            )?;
            let a2 = conjugation_invariance_audit(
                &rec,
                &rec_spectrum,
                conjugations,
                Some(200),
                seed.split(2),
            )?;
            checks.push(check_le(
                "conjugation-consistent",
                "sampled acceptance agrees across conjugations within three sigma",
                (!a1.consistent) as u64 as f64 + (!a2.consistent) as u64 as f64,
                0.5,
            ));
        }
    }

    let p_grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let z_grid = [
        C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
        C64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3),
        C64::from_polar(1.0, -2.0 * std::f64::consts::FRAC_PI_3),
        C64::new(-1.0, 0.0),
    ];
    let surface = recurrence_surface(&rec, 4, &p_grid, &z_grid, trials, seed.split(3));
    let sym = surface.check_conjugate_symmetry();
    checks.push(check_le(
        "surface-symmetry",
        "the acceptance surface is symmetric under conjugating the planted eigenvalue",
        sym.max_ratio,
        1.0,
    ));

    let mut tables = BTreeMap::new();
    tables.insert("dimension_fit".to_string(), fit.to_csv());
    tables.insert("recurrence_surface".to_string(), surface.to_csv());
    Ok(Outcome { checks, tables })
}

fn run_product_test_bounds(_p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let mut v = BTreeMap::from([
        ("k2-lower", f64::NEG_INFINITY),
        ("k2-upper", f64::NEG_INFINITY),
        ("k3-upper", f64::NEG_INFINITY),
        ("k4-upper", f64::NEG_INFINITY),
    ]);
    for d in [2usize, 3, 4] {
        let rows = exec::map_trials(trials, |i| {
            let psi = haar_state(vec![d, d], seed.split(d as u64 * 1_000_000 + i));
            let omega = closest_product_overlap(&psi, d, d);
            let a2 = product_test_closed_form(&psi, 2);
            [
                product_test_lower_bound_k2(omega) - a2,
                a2 - product_test_upper_bound(2, omega),
                product_test_closed_form(&psi, 3) - product_test_upper_bound(3, omega),
                product_test_closed_form(&psi, 4) - product_test_upper_bound(4, omega),
            ]
        });
        for row in rows {
            for (slot, x) in v.values_mut().zip(row) {
                *slot = slot.max(x);
            }
        }
    }
    let claims = [
        "two-copy acceptance is at least (1 + omega^2)/2",
        "two-copy acceptance is at most omega^2/3 + 2/3",
        "three-copy acceptance is at most its overlap upper bound",
        "four-copy acceptance is at most its overlap upper bound",
    ];
    Ok(Outcome::checks(
        v.iter()
            .zip(claims)
            .map(|((name, &worst), claim)| check_le(name, claim, worst, 1e-9))
            .collect(),
    ))
}

fn run_product_test_exactness(p: &Params, seed: Seed, trials: u64, mode: RunMode) -> Result<Outcome> {
    let d = p.get_usize("d", 3)?;
    let k = p.get_usize("k", 3)?;
    if !(2..=4).contains(&d) || !(2..=4).contains(&k) {
        return Err(invalid("need d in 2..=4 and k in 2..=4"));
    }
    match mode {
        RunMode::Exact => {
            let devs = exec::map_trials(trials, |i| {
                let psi = haar_state(vec![d, d], seed.split(i));
                let sim = product_test_probability(&psi.tensor_power(k), k, d)
                    .expect("input is k copies");
                (sim - product_test_closed_form(&psi, k)).abs()
            });
            let worst = devs.iter().copied().fold(0.0, f64::max);
            Ok(Outcome::checks(vec![check_le(
                "exactness",
                "simulated acceptance equals the symmetric-function closed form",
                worst,
                1e-10,
            )]))
        }
        RunMode::Sampled => {
            let states = trials.min(20);
            let ratios = exec::map_trials(states, |i| {
                let psi = haar_state(vec![d, d], seed.split(i));
                let r = product_test_sampled(&psi.tensor_power(k), k, d, 2000, seed.split(1_000 + i))
                    .expect("input is k copies");
                let se = r.stderr.expect("sampled report has stderr");
                (r.accept_probability - product_test_closed_form(&psi, k)).abs()
                    / (3.0 * se + 1e-12)
            });
            let worst = ratios.iter().copied().fold(0.0, f64::max);
            Ok(Outcome::checks(vec![check_le(
                "sampled-consistency",
                "the sampled estimator matches the closed form within three sigma",
                worst,
                1.0,
            )]))
        }
    }
}

fn run_recurrence(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let d = p.get_usize("d", 4)?;
    let t = p.get_u64("t", 2)?;
    let epsilon = p.get_f64("epsilon", 0.5)?;
    if !(2..=8).contains(&d) {
        return Err(invalid("d must be in 2..=8"));
    }
    if t == 0 || !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(invalid("need t >= 1 and epsilon in (0, 1]"));
    }
    let bits = default_recurrence_bits(t, epsilon);
    let schedule = default_grover_schedule(d);

    let accepted: u64 = exec::map_trials(trials, |i| {
        let mut rng = seed.split(i).rng();
        let eigs: Vec<C64> = (0..d)
            .map(|_| {
                let r = rng.gen_range(0..t);
                C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / t as f64)
            })
            .collect();
        let v = haar_unitary(d, seed.split(1_000_000 + i));
        let o = Oracle::from_spectrum(eigs, Some(v)).expect("Haar basis is unitary");
        let r = recurrence_tester(&o, t, epsilon, bits, &schedule, seed.split(2_000_000 + i))
            .expect("validated parameters");
        (r.decision == Decision::Accept) as u64
    })
    .iter()
    .sum();

    let mut far = vec![C64::new(1.0, 0.0); d];
    far[d - 1] = C64::new(0.0, 1.0);
    let rejected: u64 = exec::map_trials(trials, |i| {
        let o = Oracle::from_spectrum(far.clone(), None).expect("unit spectrum");
        let r = recurrence_tester(&o, t, epsilon, bits, &schedule, seed.split(3_000_000 + i))
            .expect("validated parameters");
        (r.decision == Decision::Reject) as u64
    })
    .iter()
    .sum();

    Ok(Outcome::checks(vec![
        check_ge(
            "yes-accepts",
            "recurrent instances are accepted on every run",
            accepted as f64,
            trials as f64,
        ),
        check_ge(
            "no-rejects",
            "the far instance is rejected on at least half of the runs",
            rejected as f64,
            (trials as f64 / 2.0).ceil(),
        ),
    ]))
}

fn run_weingarten(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let n_max = p.get_usize("n_max", 4)?;
    if !(1..=5).contains(&n_max) {
        return Err(invalid("n_max must be in 1..=5"));
    }
    let mut failures = 0u64;
    for n in 1..=n_max {
        for d in [4, 5, 6] {
            if !gram_identity_holds(n, d)? {
                failures += 1;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (j, d) in [2usize, 3].into_iter().enumerate() {
        let b = haar_unitary(d * d, seed.split(100 + j as u64));
        let chk = weingarten_average_check(&b, 2, d, trials, seed.split(j as u64))?;
        worst = worst.max(chk.residual / chk.band);
    }
    Ok(Outcome::checks(vec![
        check_le(
            "gram-identity",
            "the Weingarten matrix inverts the permutation Gram matrix in exact rationals",
            failures as f64,
            0.5,
        ),
        check_le(
            "mc-averaging",
            "the sampled two-fold twirl matches the exact formula within three sigma",
            worst,
            1.0,
        ),
    ]))
}

fn run_wrapped(p: &Params, seed: Seed, trials: u64, _mode: RunMode) -> Result<Outcome> {
    let oracles = p.get_usize("oracles", 10)?;
    if !(1..=50).contains(&oracles) {
        return Err(invalid("oracles must be in 1..=50"));
    }
    let inner = |st: &StateVector| {
        product_test_probability(st, 2, 2).expect("two copies of a qubit pair")
    };
    let mut max_excess = f64::NEG_INFINITY;
    for j in 0..oracles as u64 {
        let psi = haar_state(vec![2, 2], seed.split(j));
        let sub = Subspace::new(vec![2, 2], vec![psi.amplitudes().clone()])?;
        let o = reflection_from_subspace(sub);
        let symmetric = wrapped_qma_verifier(&o, &psi.tensor(&psi), &inner)?.accept_probability;
        let excesses = exec::map_trials(trials, |i| {
            let proof = haar_state(vec![2, 2, 2, 2], seed.split(10_000 + j * 65_536 + i));
            wrapped_qma_verifier(&o, &proof, &inner)
                .expect("proof shape matches")
                .accept_probability
                - symmetric
        });
        max_excess = excesses.iter().copied().fold(max_excess, f64::max);
    }
    Ok(Outcome::checks(vec![check_le(
        "soundness",
        "no proof is accepted with higher probability than the symmetric proof",
        max_excess,
        1e-10,
    )]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(name: &str, seed: u64, trials: u64) -> ExperimentDescriptor {
        let mut d = ExperimentDescriptor::new(name, seed);
        d.trials = Some(trials);
        d
    }

    #[test]
    fn registry_is_alphabetized_and_complete() {
        let names: Vec<&str> = list_experiments().iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        assert!(names.len() >= 10, "only {} experiments", names.len());
        assert!(names.contains(&"product-test-exactness"));
        assert!(names.contains(&"counterexample"));
    }

    #[test]
    fn unknown_experiment_is_an_error() {
        let err = run_experiment(&ExperimentDescriptor::new("nonsense", 1)).unwrap_err();
        assert!(matches!(err, Error::UnknownExperiment(_)));
    }

    #[test]
    fn unknown_and_malformed_params_are_errors() {
        let mut d = desc("product-test-exactness", 1, 5);
        d.params.insert("bogus".into(), "1".into());
        assert!(matches!(
            run_experiment(&d).unwrap_err(),
            Error::InvalidArgument(_)
        ));

        let mut d = desc("product-test-exactness", 1, 5);
        d.params.insert("d".into(), "three".into());
        assert!(matches!(
            run_experiment(&d).unwrap_err(),
            Error::InvalidArgument(_)
        ));

        let mut d = desc("product-test-exactness", 1, 5);
        d.params.insert("d".into(), "9".into());
        assert!(matches!(
            run_experiment(&d).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn exactness_example_passes() {
        let mut d = desc("product-test-exactness", 7, 10);
        d.params.insert("d".into(), "3".into());
        d.params.insert("k".into(), "3".into());
        let r = run_experiment(&d).unwrap();
        assert!(r.passed);
        assert_eq!(r.schema, "v1");
        assert_eq!(r.checks.len(), 1);
        assert!(r.checks[0].observed < 1e-10);
        assert_eq!(r.params["d"], serde_json::json!(3));
    }

    #[test]
    fn exactness_sampled_mode_passes() {
        let mut d = desc("product-test-exactness", 7, 5);
        d.mode = RunMode::Sampled;
        let r = run_experiment(&d).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks[0].name, "sampled-consistency");
    }

    #[test]
    fn counterexample_example_passes() {
        let mut d = desc("counterexample", 3, 10);
        d.params.insert("iters".into(), "60".into());
        let r = run_experiment(&d).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        assert!(r.checks[0].observed < 1e-10);
        assert!(r.checks[1].observed <= 0.75 + 1e-6);
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let d = desc("product-test-exactness", 42, 5);
        let a = run_experiment(&d).unwrap().to_json();
        let b = run_experiment(&d).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn fooling_basis_passes() {
        let r = run_experiment(&ExperimentDescriptor::new("fooling-basis", 0)).unwrap();
        assert!(r.passed, "{:?}", r.checks);
    }

    #[test]
    fn small_scale_experiments_pass() {
        for (name, trials) in [
            ("dimension-estimator", 40),
            ("entanglement-functionals", 30),
            ("lu-invariants", 5),
            ("product-test-bounds", 5),
            ("recurrence-tester", 20),
            ("wrapped-verifier", 10),
        ] {
            let mut d = desc(name, 11, trials);
            if name == "wrapped-verifier" {
                d.params.insert("oracles".into(), "2".into());
            }
            let r = run_experiment(&d).unwrap();
            assert!(r.passed, "{name}: {:?}", r.checks);
        }
    }

    #[test]
    fn weingarten_small_passes() {
        let mut d = desc("weingarten", 5, 4000);
        d.params.insert("n_max".into(), "2".into());
        let r = run_experiment(&d).unwrap();
        assert!(r.passed, "{:?}", r.checks);
    }

    #[test]
    fn polymethod_small_passes_and_emits_tables() {
        let mut d = desc("polymethod-audits", 9, 40);
        d.params.insert("conjugations".into(), "5".into());
        d.params.insert("fit_d".into(), "8".into());
        let r = run_experiment(&d).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        assert!(r.tables.contains_key("dimension_fit"));
        assert!(r.tables["recurrence_surface"].starts_with("p,z_re,z_im"));
        let json = r.to_json();
        assert!(json.contains("\"schema\": \"v1\""));
    }
}
