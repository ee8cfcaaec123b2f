//! Haar sampling of unitaries, states, and subspaces.

use crate::matrix::{CMatrix, CVector};
use crate::rng::Seed;
use crate::state::StateVector;
use crate::subspace::Subspace;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

fn phase_of(z: C64) -> C64 {
    let n = z.norm();
    if n == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / n
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal's
/// phases pushed into Q, which removes the QR gauge freedom.
pub fn haar_unitary(d: usize, seed: Seed) -> CMatrix {
    let mut rng = seed.rng();
    let g = ginibre(d, d, &mut rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let ph = phase_of(r[(j, j)]);
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar-distributed pure state with the given register shape.
pub fn haar_state(shape: Vec<usize>, seed: Seed) -> StateVector {
    let dim: usize = shape.iter().product();
    let mut rng = seed.rng();
    let v = ginibre(dim, 1, &mut rng).column(0).into_owned();
    let n = v.norm();
    StateVector::raw(CVector::from(v).scale(1.0 / n), shape)
}

/// Haar-distributed `s`-dimensional subspace of the ambient space given
/// by `shape`: thin QR of a tall Ginibre matrix.
pub fn haar_subspace(shape: Vec<usize>, s: usize, seed: Seed) -> Subspace {
    let dim: usize = shape.iter().product();
    assert!(s >= 1 && s <= dim);
    let mut rng = seed.rng();
    let g = ginibre(dim, s, &mut rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..s {
        let ph = phase_of(r[(j, j)]);
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    let basis = (0..s).map(|j| q.column(j).into_owned()).collect();
    Subspace::new(shape, basis).expect("QR yields an orthonormal basis")
}
