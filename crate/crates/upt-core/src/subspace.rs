//! Subspaces given by explicit orthonormal bases.

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::state::StateVector;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct Subspace {
    shape: Vec<usize>,
    basis: Vec<CVector>,
}

impl Subspace {
    /// Validating constructor: basis vectors must live in the ambient
    /// space and form an orthonormal family within 1e-10. An empty basis
    /// gives the zero subspace.
    pub fn new(shape: Vec<usize>, basis: Vec<CVector>) -> Result<Self> {
        let dim: usize = shape.iter().product();
        if basis.len() > dim {
            return Err(Error::InvalidArgument(format!(
                "basis of size {} in ambient dimension {}",
                basis.len(),
                dim
            )));
        }
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        let mut worst = 0.0f64;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = a.dotc(b);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        if worst > 1e-10 {
            return Err(Error::NotOrthonormal(worst));
        }
        Ok(Subspace { shape, basis })
    }

    pub fn from_states(states: &[StateVector]) -> Result<Self> {
        let shape = states
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?
            .shape()
            .to_vec();
        Subspace::new(
            shape,
            states.iter().map(|s| s.amplitudes().clone()).collect(),
        )
    }

    /// Span of the first `k` computational basis vectors of `C^d`
    /// (`k = 0` gives the zero subspace).
    pub fn canonical(d: usize, k: usize) -> Self {
        assert!(k <= d);
        let basis = (0..k)
            .map(|i| {
                let mut v = CVector::zeros(d);
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Subspace {
            shape: vec![d],
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn basis_states(&self) -> Vec<StateVector> {
        self.basis
            .iter()
            .map(|b| StateVector::raw(b.clone(), self.shape.clone()))
            .collect()
    }

    /// Matrix-free orthogonal projection onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        assert_eq!(v.len(), self.ambient_dim());
        let mut out = CVector::zeros(v.len());
        for b in &self.basis {
            let c = b.dotc(v);
            out.axpy(c, b, C64::new(1.0, 0.0));
        }
        out
    }

    pub fn project_state(&self, s: &StateVector) -> StateVector {
        StateVector::raw(self.project(s.amplitudes()), self.shape.clone())
    }

    /// Dense projector matrix.
    pub fn projector(&self) -> CMatrix {
        let n = self.ambient_dim();
        let mut p = CMatrix::zeros(n, n);
        for b in &self.basis {
            p += b * b.adjoint();
        }
        p
    }

    /// Subspace with every basis vector rotated by `g`.
    pub fn rotated(&self, g: &CMatrix) -> Subspace {
        assert_eq!(g.ncols(), self.ambient_dim());
        Subspace {
            shape: self.shape.clone(),
            basis: self.basis.iter().map(|b| g * b).collect(),
        }
    }
}
