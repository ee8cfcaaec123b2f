//! Entanglement functionals of bipartite pure states and subspaces.

use crate::haar::haar_state;
use crate::matrix::{hermitian_eigen, CMatrix, CVector};
use crate::rng::Seed;
use crate::state::{schmidt_spectrum, StateVector};
use crate::subspace::Subspace;
use num_complex::Complex64 as C64;

/// Order-2 Renyi entropy of a probability spectrum, in bits.
pub fn renyi2_entropy(spectrum: &[f64]) -> f64 {
    let purity: f64 = spectrum.iter().map(|l| l * l).sum();
    assert!(purity > 0.0);
    -purity.log2()
}

/// Complete homogeneous symmetric polynomial `h_k` of the spectrum,
/// by the prefix recurrence `h_j(x_1..x_i) = h_j(x_1..x_{i-1}) + x_i h_{j-1}(x_1..x_i)`.
pub fn h_k(spectrum: &[f64], k: usize) -> f64 {
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &x in spectrum {
        for j in 1..=k {
            h[j] += x * h[j - 1];
        }
    }
    h[k]
}

/// Brute-force `h_k`: sum over all weakly increasing index tuples.
/// Test oracle for the recurrence; exponential in `k`.
pub fn h_k_brute(spectrum: &[f64], k: usize) -> f64 {
    fn go(spectrum: &[f64], k: usize, start: usize, acc: f64) -> f64 {
        if k == 0 {
            return acc;
        }
        (start..spectrum.len())
            .map(|i| go(spectrum, k - 1, i, acc * spectrum[i]))
            .sum()
    }
    go(spectrum, k, 0, 1.0)
}

/// Largest product overlap of a bipartite pure state: the top Schmidt
/// coefficient (squared singular value).
pub fn closest_product_overlap(state: &StateVector, d1: usize, d2: usize) -> f64 {
    schmidt_spectrum(state, d1, d2)[0]
}

/// Upper bound on the k-copy product test acceptance in terms of the
/// largest product overlap `omega`.
pub fn product_test_upper_bound(k: usize, omega: f64) -> f64 {
    let kf = k as f64;
    (kf - 1.0) / (kf + 1.0) * omega.powi(k as i32) + 2.0 / (kf + 1.0)
}

/// Lower bound on the 2-copy product test acceptance.
pub fn product_test_lower_bound_k2(omega: f64) -> f64 {
    0.5 * (1.0 + omega * omega)
}

/// Summary of the entanglement structure of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct EntanglementProfile {
    pub schmidt: Vec<f64>,
    pub purity: f64,
    pub renyi2: f64,
    pub closest_product_overlap: f64,
}

impl EntanglementProfile {
    pub fn of(state: &StateVector, d1: usize, d2: usize) -> Self {
        let schmidt = schmidt_spectrum(state, d1, d2);
        let purity = schmidt.iter().map(|l| l * l).sum();
        let renyi2 = renyi2_entropy(&schmidt);
        let omega = schmidt[0];
        EntanglementProfile {
            schmidt,
            purity,
            renyi2,
            closest_product_overlap: omega,
        }
    }
}

/// Result of the alternating product-overlap search over a subspace.
#[derive(Debug, Clone)]
pub struct SubspaceOverlap {
    /// Best objective found: a certified lower bound on
    /// `max_{theta in S, product phi ⊗ xi} |<theta|phi ⊗ xi>|^2`.
    pub value: f64,
    /// Objective of each restart, in restart order.
    pub restart_values: Vec<f64>,
    pub phi: CVector,
    pub xi: CVector,
}

/// Maximizes `|<theta| phi ⊗ xi>|^2` over unit `theta` in the subspace and
/// unit product vectors, by alternating top-eigenvector updates. Each
/// update is the exact optimum of its factor, so the objective is
/// nondecreasing and every reported value is a certified lower bound.
pub fn subspace_max_product_overlap(
    sub: &Subspace,
    restarts: usize,
    iters: usize,
    seed: Seed,
) -> SubspaceOverlap {
    let shape = sub.shape();
    assert_eq!(shape.len(), 2, "need a bipartite ambient space");
    let (d1, d2) = (shape[0], shape[1]);
    // conj(T_m) for each basis vector, reshaped d1 x d2
    let mats: Vec<CMatrix> = sub
        .basis()
        .iter()
        .map(|b| CMatrix::from_fn(d1, d2, |i, j| b[i * d2 + j].conj()))
        .collect();

    let objective = |phi: &CVector, xi: &CVector| -> f64 {
        mats.iter()
            .map(|t| {
                let w = t * xi;
                let c: C64 = (0..d1).map(|i| phi[i] * w[i]).sum();
                c.norm_sqr()
            })
            .sum()
    };

    let mut best = SubspaceOverlap {
        value: -1.0,
        restart_values: Vec::with_capacity(restarts),
        phi: CVector::zeros(d1),
        xi: CVector::zeros(d2),
    };

    for r in 0..restarts {
        let rs = seed.split(r as u64);
        let mut phi = haar_state(vec![d1], rs.split(0)).amplitudes().clone();
        let mut xi = haar_state(vec![d2], rs.split(1)).amplitudes().clone();
        let mut prev = objective(&phi, &xi);
        for _ in 0..iters {
            // best phi given xi: top eigenvector of sum_m conj(w_m) w_m^T
            let mut a = CMatrix::zeros(d1, d1);
            for t in &mats {
                let w = t * &xi;
                let wbar = w.map(|z| z.conj());
                a += &wbar * w.transpose();
            }
            phi = top_eigenvector(&a);
            // best xi given phi: top eigenvector of sum_m conj(u_m) u_m^T
            let mut b = CMatrix::zeros(d2, d2);
            for t in &mats {
                let u = t.transpose() * &phi;
                let ubar = u.map(|z| z.conj());
                b += &ubar * u.transpose();
            }
            xi = top_eigenvector(&b);
            let cur = objective(&phi, &xi);
            debug_assert!(cur >= prev - 1e-12, "alternating step decreased objective");
            if cur - prev < 1e-13 {
                prev = cur;
                break;
            }
            prev = cur;
        }
        best.restart_values.push(prev);
        if prev > best.value {
            best.value = prev;
            best.phi = phi;
            best.xi = xi;
        }
    }
    best
}

fn top_eigenvector(h: &CMatrix) -> CVector {
    let (_, vecs) = hermitian_eigen(h);
    vecs.column(0).into_owned()
}
