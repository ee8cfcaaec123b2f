//! Black-box unitary oracles with query accounting.
//!
//! An [`Oracle`] supports forward, adjoint, and controlled application to
//! a register span of a state; each application charges one query to an
//! internal counter. Circuit simulations that compute acceptance
//! probabilities by projector algebra charge their nominal query budget
//! through [`Oracle::charge`] so that reported counts always equal the
//! counter delta.

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix, CVector};
use crate::rng::Seed;
use crate::state::StateVector;
use crate::subspace::Subspace;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

/// Hard cap for materializing dense matrices; the matrix-free paths have
/// no such limit and are exercised up to dimension 4096 in tests.
pub const DENSE_DIM_CAP: usize = 1024;

#[derive(Debug, Clone)]
pub enum OracleBody {
    /// `U = I - 2 P` for the orthogonal projector `P` onto a subspace.
    Reflection { subspace: Subspace },
    /// `U = V diag(z) V†`; `basis: None` means the standard basis.
    Spectrum {
        eigenvalues: Vec<C64>,
        basis: Option<CMatrix>,
    },
}

#[derive(Debug)]
pub struct Oracle {
    dim: usize,
    body: OracleBody,
    seed: Option<u64>,
    queries: AtomicU64,
}

impl Clone for Oracle {
    fn clone(&self) -> Self {
        Oracle {
            dim: self.dim,
            body: self.body.clone(),
            seed: self.seed,
            queries: AtomicU64::new(self.queries.load(Ordering::Relaxed)),
        }
    }
}

/// Reflection about the orthogonal complement of `subspace`:
/// vectors inside pick up a factor -1, vectors orthogonal are fixed.
pub fn reflection_from_subspace(subspace: Subspace) -> Oracle {
    Oracle {
        dim: subspace.ambient_dim(),
        body: OracleBody::Reflection { subspace },
        seed: None,
        queries: AtomicU64::new(0),
    }
}

/// Diagonal-instance family: each eigenvalue is independently `z` with
/// probability `p` and 1 otherwise, in the standard basis.
pub fn sample_recurrence_instance(d: usize, p: f64, z: C64, seed: Seed) -> Oracle {
    assert!((0.0..=1.0).contains(&p));
    assert!((z.norm() - 1.0).abs() < 1e-10, "z must be unimodular");
    let mut rng = seed.rng();
    let one = C64::new(1.0, 0.0);
    let eigenvalues = (0..d)
        .map(|_| if rng.gen::<f64>() < p { z } else { one })
        .collect();
    Oracle {
        dim: d,
        body: OracleBody::Spectrum {
            eigenvalues,
            basis: None,
        },
        seed: Some(seed.0),
        queries: AtomicU64::new(0),
    }
}

impl Oracle {
    pub fn from_spectrum(eigenvalues: Vec<C64>, basis: Option<CMatrix>) -> Result<Oracle> {
        let d = eigenvalues.len();
        if let Some(z) = eigenvalues.iter().find(|z| (z.norm() - 1.0).abs() > 1e-10) {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue {z} is not unimodular"
            )));
        }
        if let Some(v) = &basis {
            if v.nrows() != d || v.ncols() != d {
                return Err(Error::DimensionMismatch("eigenbasis shape".into()));
            }
            let dev = matrix::unitarity_deviation(v);
            if dev > 1e-9 {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Oracle {
            dim: d,
            body: OracleBody::Spectrum { eigenvalues, basis },
            seed: None,
            queries: AtomicU64::new(0),
        })
    }

    pub fn identity(d: usize) -> Oracle {
        Oracle::from_spectrum(vec![C64::new(1.0, 0.0); d], None).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn body(&self) -> &OracleBody {
        &self.body
    }

    pub fn queries_used(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// Adds `n` queries for a circuit whose statistics were computed in
    /// closed form rather than by explicit applications.
    pub fn charge(&self, n: u64) {
        self.queries.fetch_add(n, Ordering::Relaxed);
    }

    /// Matrix-free action on a bare vector of the oracle's dimension.
    /// Does not touch the query counter.
    pub fn apply_vec(&self, v: &CVector, adjoint: bool) -> CVector {
        assert_eq!(v.len(), self.dim);
        match &self.body {
            OracleBody::Reflection { subspace } => {
                // self-adjoint: U = U†
                let mut out = v.clone();
                out.axpy(C64::new(-2.0, 0.0), &subspace.project(v), C64::new(1.0, 0.0));
                out
            }
            OracleBody::Spectrum { eigenvalues, basis } => {
                let diag = |w: &CVector| -> CVector {
                    CVector::from_fn(self.dim, |i, _| {
                        let z = if adjoint {
                            eigenvalues[i].conj()
                        } else {
                            eigenvalues[i]
                        };
                        w[i] * z
                    })
                };
                match basis {
                    None => diag(v),
                    Some(b) => b * diag(&(b.adjoint() * v)),
                }
            }
        }
    }

    /// Applies the oracle to registers `[a, b)` of `state`. One query.
    pub fn apply(&self, state: &StateVector, a: usize, b: usize, adjoint: bool) -> StateVector {
        self.charge(1);
        transform_span(state, a, b, None, |x| self.apply_vec(x, adjoint))
    }

    /// Controlled application on registers `[a, b)` with qubit control
    /// register `c`. One query.
    pub fn apply_controlled(
        &self,
        state: &StateVector,
        c: usize,
        a: usize,
        b: usize,
        adjoint: bool,
    ) -> StateVector {
        self.charge(1);
        transform_span(state, a, b, Some(c), |x| self.apply_vec(x, adjoint))
    }

    /// Dense matrix; available only below [`DENSE_DIM_CAP`].
    pub fn matrix(&self) -> CMatrix {
        assert!(
            self.dim <= DENSE_DIM_CAP,
            "dense path capped at dimension {DENSE_DIM_CAP}"
        );
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = CVector::zeros(self.dim);
            e[j] = C64::new(1.0, 0.0);
            m.set_column(j, &self.apply_vec(&e, false));
        }
        m
    }

    /// Eigenphases in `[0, 1)` as multiples of 2 pi, with multiplicity.
    pub fn eigenphases(&self) -> Vec<f64> {
        let to_phase = |z: &C64| {
            let t = z.arg() / (2.0 * std::f64::consts::PI);
            t - t.floor()
        };
        match &self.body {
            OracleBody::Reflection { subspace } => {
                let s = subspace.dim();
                let mut out = vec![0.0; self.dim - s];
                out.extend(std::iter::repeat_n(0.5, s));
                out
            }
            OracleBody::Spectrum { eigenvalues, .. } => eigenvalues.iter().map(to_phase).collect(),
        }
    }

    /// The conjugated oracle `g U g†`, of the same kind.
    pub fn conjugated(&self, g: &CMatrix) -> Oracle {
        assert_eq!(g.nrows(), self.dim);
        let body = match &self.body {
            OracleBody::Reflection { subspace } => OracleBody::Reflection {
                subspace: subspace.rotated(g),
            },
            OracleBody::Spectrum { eigenvalues, basis } => OracleBody::Spectrum {
                eigenvalues: eigenvalues.clone(),
                basis: Some(match basis {
                    None => g.clone(),
                    Some(v) => g * v,
                }),
            },
        };
        Oracle {
            dim: self.dim,
            body,
            seed: None,
            queries: AtomicU64::new(0),
        }
    }

    pub fn to_descriptor(&self) -> OracleDescriptor {
        match &self.body {
            OracleBody::Reflection { subspace } => OracleDescriptor::Reflection {
                dim: self.dim,
                basis: subspace.basis().iter().map(vec_to_pairs).collect(),
                seed: self.seed,
            },
            OracleBody::Spectrum { eigenvalues, basis } => OracleDescriptor::Spectrum {
                dim: self.dim,
                spectrum: eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
                eigenbasis: basis.as_ref().map(matrix_to_pairs),
                seed: self.seed,
            },
        }
    }

    pub fn from_descriptor(d: &OracleDescriptor) -> Result<Oracle> {
        match d {
            OracleDescriptor::Reflection { dim, basis, seed } => {
                let vectors: Vec<CVector> = basis.iter().map(|b| pairs_to_vec(b)).collect();
                if vectors.iter().any(|v| v.len() != *dim) {
                    return Err(Error::DimensionMismatch("descriptor basis length".into()));
                }
                let sub = Subspace::new(vec![*dim], vectors)?;
                let mut o = reflection_from_subspace(sub);
                o.seed = *seed;
                Ok(o)
            }
            OracleDescriptor::Spectrum {
                dim,
                spectrum,
                eigenbasis,
                seed,
            } => {
                if spectrum.len() != *dim {
                    return Err(Error::DimensionMismatch("descriptor spectrum length".into()));
                }
                let eig = spectrum.iter().map(|[r, i]| C64::new(*r, *i)).collect();
                let basis = eigenbasis.as_ref().map(|b| pairs_to_matrix(b, *dim));
                let mut o = Oracle::from_spectrum(eig, basis)?;
                o.seed = *seed;
                Ok(o)
            }
        }
    }
}

fn vec_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn pairs_to_vec(p: &[[f64; 2]]) -> CVector {
    CVector::from_fn(p.len(), |i, _| C64::new(p[i][0], p[i][1]))
}

fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn pairs_to_matrix(cols: &[Vec<[f64; 2]>], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| C64::new(cols[j][i][0], cols[j][i][1]))
}

/// JSON-serializable oracle description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleDescriptor {
    Reflection {
        dim: usize,
        basis: Vec<Vec<[f64; 2]>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Spectrum {
        dim: usize,
        spectrum: Vec<[f64; 2]>,
        #[serde(skip_serializing_if = "Option::is_none")]
        eigenbasis: Option<Vec<Vec<[f64; 2]>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

/// Applies `f` to every `[a, b)`-span slice of the amplitude vector,
/// optionally only where qubit register `ctrl` is 1.
fn transform_span(
    state: &StateVector,
    a: usize,
    b: usize,
    ctrl: Option<usize>,
    f: impl Fn(&CVector) -> CVector,
) -> StateVector {
    let shape = state.shape();
    assert!(a < b && b <= shape.len());
    if let Some(c) = ctrl {
        assert_eq!(shape[c], 2, "control register must be a qubit");
        assert!(c < a || c >= b, "control register inside the target span");
    }
    let mid: usize = shape[a..b].iter().product();
    let left: usize = shape[..a].iter().product();
    let right: usize = shape[b..].iter().product();
    let ctrl_stride = ctrl.map(|c| {
        if c < a {
            (shape[c + 1..a].iter().product::<usize>(), true)
        } else {
            (shape[c + 1..].iter().product::<usize>(), false)
        }
    });
    let mut out = state.amplitudes().clone();
    let mut x = CVector::zeros(mid);
    for l in 0..left {
        for r in 0..right {
            if let Some((stride, in_left)) = ctrl_stride {
                let digit = if in_left { l / stride % 2 } else { r / stride % 2 };
                if digit != 1 {
                    continue;
                }
            }
            for k in 0..mid {
                x[k] = state.amplitudes()[(l * mid + k) * right + r];
            }
            let y = f(&x);
            for k in 0..mid {
                out[(l * mid + k) * right + r] = y[k];
            }
        }
    }
    StateVector::raw(out, shape.to_vec())
}
