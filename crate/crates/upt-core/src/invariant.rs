//! Symmetric-group data (partitions, characters) and the matrix
//! functionals built from them: Weingarten weights for moments of the
//! unitary group, permutation trace functionals, and local-unitary
//! invariants of bipartite states.
//!
//! Everything group-theoretic is exact: characters are integers from the
//! Murnaghan-Nakayama recursion, Weingarten weights and principal
//! specializations are `BigRational`s. Floating point enters only when a
//! weight multiplies a matrix.

use crate::error::{Error, Result};
use crate::exec;
use crate::haar::haar_unitary;
use crate::matrix::{kron_power, CMatrix};
use crate::perm::{decode_index, permutation_operator, Permutation};
use crate::rng::Seed;
use crate::state::{schmidt_spectrum, StateVector};
use nalgebra::DMatrix;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use num_complex::Complex64 as C64;

/// An integer partition: nonincreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Self {
        for w in parts.windows(2) {
            assert!(w[0] >= w[1], "parts must be nonincreasing: {parts:?}");
        }
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        Partition(parts)
    }

    /// The number being partitioned.
    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition(Vec::new());
        }
        let cols = self.0[0];
        Partition((0..cols).map(|j| self.0.iter().filter(|&&r| r > j).count()).collect())
    }

    /// Hook length of cell `(i, j)` (0-based).
    fn hook(&self, conj: &Partition, i: usize, j: usize) -> usize {
        self.0[i] - j + conj.0[j] - i - 1
    }
}

/// All partitions of `n` in descending lexicographic order, `(n)` first.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Murnaghan-Nakayama recursion via first-column hook (beta) numbers:
/// removing a border strip of length `mu[0]` from `lambda` is subtracting
/// `mu[0]` from one beta number so that the result stays a valid set; the
/// sign counts the beta numbers jumped over.
fn mn_character(lambda: &[usize], mu: &[usize]) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    if lambda.is_empty() {
        return 0;
    }
    let strip = mu[0] as i64;
    let m = lambda.len();
    let beta: Vec<i64> = (0..m).map(|i| lambda[i] as i64 + (m - 1 - i) as i64).collect();
    let mut total = 0;
    for i in 0..m {
        let target = beta[i] - strip;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let jumps = beta.iter().filter(|&&b| target < b && b < beta[i]).count();
        let sign = if jumps % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let rest: Vec<usize> = nb
            .iter()
            .enumerate()
            .map(|(j, &b)| (b - (m - 1 - j) as i64) as usize)
            .filter(|&r| r > 0)
            .collect();
        total += sign * mn_character(&rest, &mu[1..]);
    }
    total
}

/// Exact character table of `S_n`, `n <= 6`. Rows are indexed by the
/// irrep label, columns by the conjugacy class, both as partitions in
/// `partitions_of(n)` order.
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    chars: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Self {
        assert!((1..=6).contains(&n), "character table supported for 1 <= n <= 6");
        let partitions = partitions_of(n);
        let chars = partitions
            .iter()
            .map(|lam| partitions.iter().map(|mu| mn_character(lam.parts(), mu.parts())).collect())
            .collect();
        CharacterTable { n, partitions, chars }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    fn index_of(&self, p: &[usize]) -> usize {
        self.partitions
            .iter()
            .position(|q| q.parts() == p)
            .expect("not a partition of n")
    }

    pub fn character(&self, lambda: &Partition, class: &Partition) -> i64 {
        self.chars[self.index_of(lambda.parts())][self.index_of(class.parts())]
    }

    pub fn character_of(&self, lambda: &Partition, sigma: &Permutation) -> i64 {
        self.chars[self.index_of(lambda.parts())][self.index_of(&sigma.cycle_type())]
    }

    /// Irrep dimension: the character at the identity class.
    pub fn dimension(&self, lambda: &Partition) -> i64 {
        let ones = vec![1; self.n];
        self.chars[self.index_of(lambda.parts())][self.index_of(&ones)]
    }

    /// Size of the conjugacy class with the given cycle type: `n!/z_mu`.
    pub fn class_size(&self, class: &Partition) -> u64 {
        factorial(self.n) / centralizer_order(class)
    }
}

/// `z_mu`, the centralizer order of a permutation of cycle type `mu`.
pub fn centralizer_order(mu: &Partition) -> u64 {
    let mut z = 1u64;
    let mut k = 0;
    let mut mult = 0u64;
    for &p in mu.parts() {
        if p == k {
            mult += 1;
        } else {
            k = p;
            mult = 1;
        }
        z *= p as u64 * mult;
    }
    z
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio_int(x: u64) -> BigRational {
    BigRational::from_integer(big(x))
}

fn bigint_pow(base: u64, exp: usize) -> BigInt {
    let b = big(base);
    let mut out = big(1);
    for _ in 0..exp {
        out *= &b;
    }
    out
}

/// Number of semistandard tableaux of shape `lambda` with entries in
/// `1..=d`, by the hook content formula. Zero when `lambda` has more than
/// `d` rows.
pub fn schur_at_ones(lambda: &Partition, d: usize) -> BigRational {
    if lambda.rows() > d {
        return BigRational::zero();
    }
    let conj = lambda.conjugate();
    let mut num = big(1);
    let mut den = big(1);
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            num *= BigInt::from(d as i64 + j as i64 - i as i64);
            den *= big(lambda.hook(&conj, i, j) as u64);
        }
    }
    BigRational::new(num, den)
}

/// Exact Weingarten weights for `S_n` moments of the Haar unitary group
/// on `C^d`, one weight per cycle type. Requires `d >= n` so every irrep
/// of `S_n` contributes.
pub struct WeingartenTable {
    d: usize,
    chars: CharacterTable,
    values: Vec<BigRational>,
}

impl WeingartenTable {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d < n {
            return Err(Error::InvalidArgument(format!(
                "Weingarten weights need d >= n, got n = {n}, d = {d}"
            )));
        }
        let chars = CharacterTable::new(n);
        let nfact_sq = BigRational::from_integer(big(factorial(n)) * big(factorial(n)));
        let values = chars
            .partitions
            .iter()
            .map(|mu| {
                let mut acc = BigRational::zero();
                for lam in &chars.partitions {
                    let f = chars.dimension(lam);
                    let chi = chars.character(lam, mu);
                    acc += BigRational::from_integer(BigInt::from(f * f * chi)) / schur_at_ones(lam, d);
                }
                acc / &nfact_sq
            })
            .collect();
        Ok(WeingartenTable { d, chars, values })
    }

    pub fn n(&self) -> usize {
        self.chars.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn value(&self, cycle_type: &Partition) -> &BigRational {
        &self.values[self.chars.index_of(cycle_type.parts())]
    }

    pub fn value_of(&self, sigma: &Permutation) -> &BigRational {
        &self.values[self.chars.index_of(&sigma.cycle_type())]
    }

    pub fn value_of_f64(&self, sigma: &Permutation) -> f64 {
        self.value_of(sigma).to_f64().expect("Weingarten weight fits in f64")
    }
}

/// One-shot Weingarten weight for a cycle type.
pub fn weingarten(cycle_type: &Partition, d: usize) -> Result<BigRational> {
    let table = WeingartenTable::new(cycle_type.n(), d)?;
    Ok(table.value(cycle_type).clone())
}

/// Exact check of the defining property of the Weingarten weights:
/// `sum_tau Wg(sigma^{-1} tau, d) d^{cycles(tau^{-1} pi)} = [sigma = pi]`
/// for all `sigma, pi` in `S_n`.
pub fn gram_identity_holds(n: usize, d: usize) -> Result<bool> {
    let wg = WeingartenTable::new(n, d)?;
    let perms = Permutation::all(n);
    let one = ratio_int(1);
    for sigma in &perms {
        let sigma_inv = sigma.inverse();
        for pi in &perms {
            let mut acc = BigRational::zero();
            for tau in &perms {
                let w = wg.value_of(&sigma_inv.compose(tau));
                let c = tau.inverse().compose(pi).num_cycles();
                acc += w * BigRational::from_integer(bigint_pow(d as u64, c));
            }
            let expect = if sigma == pi { &one } else { &BigRational::zero() as _ };
            if &acc != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Tr_sigma(A_1, .., A_n)`: over each cycle `(c, sigma(c), ..)` of
/// `sigma`, the trace of the product of the matrices in cycle order;
/// multiplied over cycles.
pub fn tr_sigma(sigma: &Permutation, mats: &[CMatrix]) -> C64 {
    assert_eq!(sigma.n(), mats.len());
    let mut out = C64::new(1.0, 0.0);
    for cyc in sigma.cycles() {
        let mut m = mats[cyc[0]].clone();
        for &j in &cyc[1..] {
            m = &m * &mats[j];
        }
        out *= m.trace();
    }
    out
}

/// The exact `n`-th moment of conjugation by a Haar unitary on `C^d`:
/// `E[g^{dagger ⊗n} B g^{⊗n}] = sum_{sigma,tau} Wg(sigma^{-1}tau, d)
/// Tr(B P_tau) P_sigma`.
pub fn weingarten_average(b: &CMatrix, n: usize, d: usize) -> Result<CMatrix> {
    let wg = WeingartenTable::new(n, d)?;
    let dim = d.pow(n as u32);
    assert_eq!(b.nrows(), dim, "B must act on (C^d)^{{⊗n}}");
    assert_eq!(b.ncols(), dim);
    let perms = Permutation::all(n);
    let ops: Vec<CMatrix> = perms.iter().map(|s| permutation_operator(s, d)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for (si, sigma) in perms.iter().enumerate() {
        let sigma_inv = sigma.inverse();
        let mut coeff = C64::new(0.0, 0.0);
        for (ti, tau) in perms.iter().enumerate() {
            let w = wg.value_of_f64(&sigma_inv.compose(tau));
            coeff += (b * &ops[ti]).trace() * C64::new(w, 0.0);
        }
        out += &ops[si] * coeff;
    }
    Ok(out)
}

/// Monte Carlo cross-check of [`weingarten_average`].
#[derive(Debug, Clone)]
pub struct AveragingCheck {
    pub samples: u64,
    /// Frobenius distance between the sample mean and the exact moment.
    pub residual: f64,
    /// Three times the estimated standard deviation of that distance.
    pub band: f64,
    pub within_band: bool,
}

/// Samples `g` from the Haar measure, averages `g^{dagger ⊗n} B g^{⊗n}`,
/// and compares with the exact Weingarten moment. The band aggregates the
/// entrywise sample variances into a 3-sigma Frobenius bound.
pub fn weingarten_average_check(
    b: &CMatrix,
    n: usize,
    d: usize,
    samples: u64,
    seed: Seed,
) -> Result<AveragingCheck> {
    assert!(samples > 0);
    let rhs = weingarten_average(b, n, d)?;
    let dim = b.nrows();
    let chunks = 64.min(samples);
    let per = samples.div_ceil(chunks);
    let partials = exec::map_trials(chunks, |c| {
        let mut sum = CMatrix::zeros(dim, dim);
        let mut sumsq = DMatrix::<f64>::zeros(dim, dim);
        for i in c * per..samples.min((c + 1) * per) {
            let g = haar_unitary(d, seed.split(i));
            let gn = kron_power(&g, n);
            let x = gn.adjoint() * b * &gn;
            for r in 0..dim {
                for s in 0..dim {
                    sumsq[(r, s)] += x[(r, s)].norm_sqr();
                }
            }
            sum += x;
        }
        (sum, sumsq)
    });
    let mut sum = CMatrix::zeros(dim, dim);
    let mut sumsq = DMatrix::<f64>::zeros(dim, dim);
    for (s, sq) in partials {
        sum += s;
        sumsq += sq;
    }
    let m = samples as f64;
    let mean = sum / C64::new(m, 0.0);
    let mut var_total = 0.0;
    for r in 0..dim {
        for s in 0..dim {
            var_total += (sumsq[(r, s)] / m - mean[(r, s)].norm_sqr()).max(0.0);
        }
    }
    let residual = (&mean - &rhs).norm();
    let band = 3.0 * (var_total / m).sqrt();
    Ok(AveragingCheck {
        samples,
        residual,
        band,
        within_band: residual <= band + 1e-9,
    })
}

/// `Tr((R_sigma ⊗ R_tau) X^{⊗k})` where `X` acts on `C^da ⊗ C^db`,
/// `R_sigma` permutes the `k` A registers and `R_tau` the `k` B
/// registers. Evaluated entrywise without materializing `X^{⊗k}`.
pub fn lu_invariant(
    sigma: &Permutation,
    tau: &Permutation,
    x: &CMatrix,
    da: usize,
    db: usize,
) -> C64 {
    let k = sigma.n();
    assert_eq!(tau.n(), k);
    let dp = da * db;
    assert_eq!(x.nrows(), dp);
    assert_eq!(x.ncols(), dp);
    let sinv = sigma.inverse();
    let tinv = tau.inverse();
    let shape = vec![dp; k];
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..dp.pow(k as u32) {
        let digits = decode_index(m, &shape);
        let a: Vec<usize> = digits.iter().map(|&p| p / db).collect();
        let bvals: Vec<usize> = digits.iter().map(|&p| p % db).collect();
        let mut prod = C64::new(1.0, 0.0);
        for c in 0..k {
            let col = a[sinv.apply(c)] * db + bvals[tinv.apply(c)];
            prod *= x[(digits[c], col)];
        }
        acc += prod;
    }
    acc
}

/// [`lu_invariant`] of the rank-one `X = |psi><psi|` for a bipartite
/// `psi` (shape `[da, db]`).
pub fn lu_invariant_state(sigma: &Permutation, tau: &Permutation, psi: &StateVector) -> C64 {
    assert_eq!(psi.shape().len(), 2, "state must be bipartite");
    let amps = psi.amplitudes();
    let x = amps * amps.adjoint();
    lu_invariant(sigma, tau, &x, psi.shape()[0], psi.shape()[1])
}

#[derive(Debug, Clone)]
pub struct SpectrumAudit {
    pub base: C64,
    /// Largest deviation under `g ⊗ h` rotations of the input state.
    pub max_rotation_deviation: f64,
    /// Largest deviation for states rebuilt from the same Schmidt
    /// spectrum in fresh local bases.
    pub max_equal_spectrum_deviation: f64,
}

/// Checks that the invariant depends on a bipartite pure state only
/// through its Schmidt spectrum: local rotations leave it fixed, and any
/// state assembled from the same spectrum gives the same value.
pub fn spectrum_dependence_audit(
    psi: &StateVector,
    sigma: &Permutation,
    tau: &Permutation,
    rotations: usize,
    seed: Seed,
) -> SpectrumAudit {
    assert_eq!(psi.shape().len(), 2, "state must be bipartite");
    let (da, db) = (psi.shape()[0], psi.shape()[1]);
    let base = lu_invariant_state(sigma, tau, psi);
    let spectrum = schmidt_spectrum(psi, da, db);
    let mut rot_dev: f64 = 0.0;
    let mut eq_dev: f64 = 0.0;
    for r in 0..rotations as u64 {
        let g = haar_unitary(da, seed.split(2 * r));
        let h = haar_unitary(db, seed.split(2 * r + 1));
        let rotated = psi.apply_matrix_to_span(&g, 0, 1).apply_matrix_to_span(&h, 1, 2);
        rot_dev = rot_dev.max((lu_invariant_state(sigma, tau, &rotated) - base).norm());

        let mut amps = crate::matrix::CVector::zeros(da * db);
        for (i, &lam) in spectrum.iter().enumerate().take(da.min(db)) {
            let w = C64::new(lam.max(0.0).sqrt(), 0.0);
            for ai in 0..da {
                for bi in 0..db {
                    amps[ai * db + bi] += w * g[(ai, i)] * h[(bi, i)];
                }
            }
        }
        let rebuilt = StateVector::raw(amps, vec![da, db]).normalized();
        eq_dev = eq_dev.max((lu_invariant_state(sigma, tau, &rebuilt) - base).norm());
    }
    SpectrumAudit {
        base,
        max_rotation_deviation: rot_dev,
        max_equal_spectrum_deviation: eq_dev,
    }
}
