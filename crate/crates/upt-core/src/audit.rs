//! Falsification harnesses for the polynomial structure of query
//! testers: acceptance that depends only on the spectrum, acceptance
//! that is a low-degree univariate polynomial in the subspace dimension,
//! and the two-parameter recurrence surface with its conjugation
//! symmetry. The audits check consequences numerically; they do not
//! extract the polynomials symbolically.

use crate::error::Result;
use crate::exec;
use crate::haar::haar_unitary;
use crate::oracle::{sample_recurrence_instance, Oracle};
use crate::phase::recurrence_tester;
use crate::rng::Seed;
use crate::state::StateVector;
use crate::util::mean_stderr;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;

/// A property tester whose only access to the unknown unitary is the
/// oracle interface. `queries` bounds the fitted polynomial degree at
/// `2 * queries`.
pub trait Tester: Sync {
    fn name(&self) -> &'static str;
    fn queries(&self) -> u32;
    /// Exact acceptance probability on `o`.
    fn accept_probability(&self, o: &Oracle) -> f64;
    /// Empirical acceptance over seeded runs: `(mean, stderr)`. The
    /// default samples the exact probability; testers with an internal
    /// measurement override it.
    fn sample_accept(&self, o: &Oracle, trials: u64, seed: Seed) -> (f64, f64) {
        let p = self.accept_probability(o);
        let hits = exec::map_trials(trials, |i| {
            if seed.split(i).rng().gen::<f64>() < p {
                1.0
            } else {
                0.0
            }
        });
        mean_stderr(&hits)
    }
}

/// One query: prepares the maximally entangled state and measures the
/// `(I - U)/2 ⊗ I` image. On a reflection about an s-dimensional
/// subspace this accepts with probability exactly `s/d`.
pub struct MaxEntangledMembership;

impl Tester for MaxEntangledMembership {
    fn name(&self) -> &'static str {
        "max_entangled_membership"
    }

    fn queries(&self) -> u32 {
        1
    }

    fn accept_probability(&self, o: &Oracle) -> f64 {
        let phi = StateVector::max_entangled(o.dim());
        let applied = o.apply(&phi, 0, 1, false);
        phi.add(&applied.scale(C64::new(-1.0, 0.0)))
            .scale(C64::new(0.5, 0.0))
            .norm_squared()
    }
}

/// One query: overlap of the uniform state with its `(I + U)/2` image.
/// Affine in the dimension of a canonical reflection subspace; not
/// conjugation invariant (the input is basis-fixed).
pub struct PlusEigenspaceOverlap;

impl Tester for PlusEigenspaceOverlap {
    fn name(&self) -> &'static str {
        "plus_eigenspace_overlap"
    }

    fn queries(&self) -> u32 {
        1
    }

    fn accept_probability(&self, o: &Oracle) -> f64 {
        let u = StateVector::uniform(vec![o.dim()]);
        let applied = o.apply(&u, 0, 1, false);
        u.add(&applied).scale(C64::new(0.5, 0.0)).norm_squared()
    }
}

/// Zero queries: accepts with a fixed probability.
pub struct CoinFlip(pub f64);

impl Tester for CoinFlip {
    fn name(&self) -> &'static str {
        "coin_flip"
    }

    fn queries(&self) -> u32 {
        0
    }

    fn accept_probability(&self, o: &Oracle) -> f64 {
        let _ = o;
        self.0
    }
}

/// The recurrence tester viewed as a spectrum-only tester; acceptance is
/// its exact per-run probability, sampling runs its seeded decisions.
pub struct RecurrenceAcceptance {
    pub t: u64,
    pub epsilon: f64,
    pub bits: u32,
    pub schedule: Vec<u64>,
}

impl Tester for RecurrenceAcceptance {
    fn name(&self) -> &'static str {
        "recurrence_acceptance"
    }

    fn queries(&self) -> u32 {
        let per_stage: u64 = self.schedule.iter().map(|r| 1 + 2 * r).sum();
        (((1u64 << self.bits) - 1) * per_stage) as u32
    }

    fn accept_probability(&self, o: &Oracle) -> f64 {
        recurrence_tester(o, self.t, self.epsilon, self.bits, &self.schedule, Seed(0))
            .expect("validated parameters")
            .accept_probability
    }

    fn sample_accept(&self, o: &Oracle, trials: u64, seed: Seed) -> (f64, f64) {
        let hits = exec::map_trials(trials, |i| {
            let r = recurrence_tester(o, self.t, self.epsilon, self.bits, &self.schedule, seed.split(i))
                .expect("validated parameters");
            if r.decision == crate::tester::Decision::Accept {
                1.0
            } else {
                0.0
            }
        });
        mean_stderr(&hits)
    }
}

#[derive(Debug, Clone)]
pub struct ConjugationAudit {
    /// Acceptance on the unconjugated (diagonal) instance.
    pub base: f64,
    /// Acceptance per Haar conjugation.
    pub values: Vec<f64>,
    /// Standard errors when sampled; absent in exact mode.
    pub stderrs: Option<Vec<f64>>,
    pub max_spread: f64,
    /// Exact mode: spread within 1e-9. Sampled: every conjugation within
    /// 3 sigma of the base value.
    pub consistent: bool,
}

/// Runs the tester on `V diag(spectrum) V†` for Haar `V` and checks the
/// acceptance does not move. `samples = None` uses exact probabilities.
pub fn conjugation_invariance_audit(
    tester: &dyn Tester,
    spectrum: &[C64],
    conjugations: usize,
    samples: Option<u64>,
    seed: Seed,
) -> Result<ConjugationAudit> {
    let base_oracle = Oracle::from_spectrum(spectrum.to_vec(), None)?;
    let base = tester.accept_probability(&base_oracle);
    let runs = exec::map_trials(conjugations as u64, |i| {
        let v = haar_unitary(spectrum.len(), seed.split(2 * i));
        let o = Oracle::from_spectrum(spectrum.to_vec(), Some(v)).expect("Haar basis is unitary");
        match samples {
            None => (tester.accept_probability(&o), 0.0),
            Some(n) => tester.sample_accept(&o, n, seed.split(2 * i + 1)),
        }
    });
    let values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let max_spread = values.iter().map(|v| (v - base).abs()).fold(0.0, f64::max);
    let consistent = match samples {
        None => max_spread <= 1e-9,
        Some(_) => runs.iter().all(|&(v, se)| (v - base).abs() <= 3.0 * se + 1e-9),
    };
    Ok(ConjugationAudit {
        base,
        values,
        stderrs: samples.map(|_| runs.iter().map(|r| r.1).collect()),
        max_spread,
        consistent,
    })
}

#[derive(Debug, Clone)]
pub struct DimensionFit {
    pub d: usize,
    pub degree: usize,
    /// Exact acceptance at each canonical subspace dimension `k = 0..=d`.
    pub values: Vec<f64>,
    /// Least-squares coefficients in the scaled variable `x = k/d`,
    /// constant term first.
    pub coefficients: Vec<f64>,
    pub max_residual: f64,
}

impl DimensionFit {
    /// `k,acceptance,fitted,residual` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,acceptance,fitted,residual\n");
        for (k, &p) in self.values.iter().enumerate() {
            let fitted = self.eval(k as f64 / self.d as f64);
            out.push_str(&format!("{k},{p},{fitted},{}\n", p - fitted));
        }
        out
    }

    fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Evaluates the tester on reflections about the canonical subspaces of
/// dimension `k = 0..=d` and least-squares fits a polynomial of degree
/// `2 * queries` to the acceptance curve.
pub fn dimension_polynomial_fit(tester: &dyn Tester, d: usize) -> DimensionFit {
    let degree = 2 * tester.queries() as usize;
    let values: Vec<f64> = (0..=d)
        .map(|k| {
            let o = crate::oracle::reflection_from_subspace(crate::subspace::Subspace::canonical(d, k));
            tester.accept_probability(&o)
        })
        .collect();
    let cols = (degree + 1).min(values.len());
    let vander = DMatrix::<f64>::from_fn(values.len(), cols, |r, c| {
        (r as f64 / d as f64).powi(c as i32)
    });
    let rhs = DVector::<f64>::from_vec(values.clone());
    let coefficients: Vec<f64> = vander
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .expect("least squares solvable")
        .iter()
        .copied()
        .collect();
    let fit = DimensionFit {
        d,
        degree,
        values,
        coefficients,
        max_residual: 0.0,
    };
    let max_residual = fit
        .values
        .iter()
        .enumerate()
        .map(|(k, &p)| (p - fit.eval(k as f64 / d as f64)).abs())
        .fold(0.0, f64::max);
    DimensionFit { max_residual, ..fit }
}

#[derive(Debug, Clone)]
pub struct SurfaceCell {
    pub p: f64,
    pub z: C64,
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

#[derive(Debug, Clone)]
pub struct RecurrenceSurface {
    /// Row-major over `p_grid x z_grid`.
    pub cells: Vec<SurfaceCell>,
    pub p_len: usize,
    pub z_len: usize,
}

#[derive(Debug, Clone)]
pub struct SymmetryCheck {
    /// Conjugate pairs compared.
    pub pairs: usize,
    /// Largest |difference| / (3 * combined sigma) over the pairs.
    pub max_ratio: f64,
    pub ok: bool,
}

impl RecurrenceSurface {
    pub fn cell(&self, i: usize, j: usize) -> &SurfaceCell {
        &self.cells[i * self.z_len + j]
    }

    /// `p,z_re,z_im,mean,stderr,trials` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,z_re,z_im,mean,stderr,trials\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.p, c.z.re, c.z.im, c.mean, c.stderr, c.trials
            ));
        }
        out
    }

    /// Compares each cell against the cell at the conjugated `z`; the
    /// estimates come from independent sample streams, so agreement
    /// within 3 sigma is a statistical check, not an identity.
    pub fn check_conjugate_symmetry(&self) -> SymmetryCheck {
        let mut pairs = 0;
        let mut max_ratio: f64 = 0.0;
        for i in 0..self.p_len {
            for j in 0..self.z_len {
                let a = self.cell(i, j);
                if a.z.im <= 1e-12 {
                    continue; // self-conjugate or handled from the other member
                }
                let Some(jc) = (0..self.z_len)
                    .find(|&jj| (self.cell(i, jj).z - a.z.conj()).norm() < 1e-12)
                else {
                    continue;
                };
                let b = self.cell(i, jc);
                pairs += 1;
                let sigma = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
                let diff = (a.mean - b.mean).abs();
                let ratio = if diff <= 1e-12 { 0.0 } else { diff / (3.0 * sigma + 1e-12) };
                max_ratio = max_ratio.max(ratio);
            }
        }
        SymmetryCheck {
            pairs,
            max_ratio,
            ok: max_ratio <= 1.0,
        }
    }
}

/// Monte Carlo estimate of the tester's expected acceptance over the
/// random diagonal instance family: each of the `d` eigenvalues is `z`
/// with probability `p`, else 1. Cells use disjoint seed streams.
pub fn recurrence_surface(
    tester: &dyn Tester,
    d: usize,
    p_grid: &[f64],
    z_grid: &[C64],
    trials: u64,
    seed: Seed,
) -> RecurrenceSurface {
    let mut cells = Vec::with_capacity(p_grid.len() * z_grid.len());
    for (i, &p) in p_grid.iter().enumerate() {
        for (j, &z) in z_grid.iter().enumerate() {
            let cell_seed = seed.split((i * z_grid.len() + j) as u64);
            let accepts = exec::map_trials(trials, |n| {
                let o = sample_recurrence_instance(d, p, z, cell_seed.split(n));
                tester.accept_probability(&o)
            });
            let (mean, stderr) = mean_stderr(&accepts);
            cells.push(SurfaceCell {
                p,
                z,
                mean,
                stderr,
                trials,
            });
        }
    }
    RecurrenceSurface {
        cells,
        p_len: p_grid.len(),
        z_len: z_grid.len(),
    }
}
