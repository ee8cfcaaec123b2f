//! Pure states on multi-register systems.
//!
//! A [`StateVector`] stores amplitudes in row-major register order:
//! register 0 is the most significant digit of the basis index. All
//! circuit-level manipulations (tensoring, register permutations, applying
//! an operator to a register span, partial trace) live here.

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::perm::{decode_index, encode_index, Permutation};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVector,
    shape: Vec<usize>,
}

impl StateVector {
    /// Validating constructor: the length must match the shape and the
    /// norm must be 1 within 1e-10.
    pub fn new(amps: CVector, shape: Vec<usize>) -> Result<Self> {
        let dim: usize = shape.iter().product();
        if dim != amps.len() || shape.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "shape {:?} does not describe a vector of length {}",
                shape,
                amps.len()
            )));
        }
        let n2 = amps.norm_squared();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(n2));
        }
        Ok(StateVector { amps, shape })
    }

    /// Wraps possibly unnormalized amplitudes (projector outputs and other
    /// intermediate vectors).
    pub fn raw(amps: CVector, shape: Vec<usize>) -> Self {
        let dim: usize = shape.iter().product();
        assert_eq!(dim, amps.len(), "shape/length mismatch");
        StateVector { amps, shape }
    }

    pub fn basis_state(shape: Vec<usize>, digits: &[usize]) -> Self {
        let dim: usize = shape.iter().product();
        let mut amps = CVector::zeros(dim);
        amps[encode_index(digits, &shape)] = C64::new(1.0, 0.0);
        StateVector { amps, shape }
    }

    /// Uniform superposition over all basis states.
    pub fn uniform(shape: Vec<usize>) -> Self {
        let dim: usize = shape.iter().product();
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            amps: CVector::from_element(dim, a),
            shape,
        }
    }

    /// The maximally entangled state on `C^d ⊗ C^d`.
    pub fn max_entangled(d: usize) -> Self {
        let mut amps = CVector::zeros(d * d);
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        for i in 0..d {
            amps[i * d + i] = a;
        }
        StateVector {
            amps,
            shape: vec![d, d],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        StateVector {
            amps: self.amps.scale(1.0 / n),
            shape: self.shape.clone(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.shape, other.shape, "register shapes differ");
        self.amps.dotc(&other.amps)
    }

    pub fn scale(&self, z: C64) -> StateVector {
        StateVector {
            amps: self.amps.map(|a| a * z),
            shape: self.shape.clone(),
        }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.shape, other.shape);
        StateVector {
            amps: &self.amps + &other.amps,
            shape: self.shape.clone(),
        }
    }

    /// Tensor product; registers of `other` follow registers of `self`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        StateVector {
            amps: self.amps.kronecker(&other.amps),
            shape,
        }
    }

    /// n-fold tensor power.
    pub fn tensor_power(&self, n: usize) -> StateVector {
        assert!(n >= 1);
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        out
    }

    /// Register action of `sigma`: output register `r` holds what input
    /// register `sigma^{-1}(r)` held.
    pub fn apply_register_permutation(&self, sigma: &Permutation) -> StateVector {
        assert_eq!(sigma.n(), self.shape.len());
        let inv = sigma.inverse();
        let out_shape: Vec<usize> = (0..sigma.n()).map(|r| self.shape[inv.apply(r)]).collect();
        let mut out = CVector::zeros(self.dim());
        for idx in 0..self.dim() {
            let x = decode_index(idx, &self.shape);
            let y: Vec<usize> = (0..sigma.n()).map(|r| x[inv.apply(r)]).collect();
            out[encode_index(&y, &out_shape)] = self.amps[idx];
        }
        StateVector {
            amps: out,
            shape: out_shape,
        }
    }

    /// Permutes the listed registers among themselves by `sigma`
    /// (an element of S_k for `k = regs.len()`), leaving the rest fixed.
    /// All listed registers must have equal dimension.
    pub fn permute_register_subset(&self, regs: &[usize], sigma: &Permutation) -> StateVector {
        assert_eq!(sigma.n(), regs.len());
        let d0 = self.shape[regs[0]];
        assert!(regs.iter().all(|&r| self.shape[r] == d0));
        let inv = sigma.inverse();
        let mut out = CVector::zeros(self.dim());
        let mut digits;
        for idx in 0..self.dim() {
            digits = decode_index(idx, &self.shape);
            let picked: Vec<usize> = regs.iter().map(|&r| digits[r]).collect();
            for (r, &reg) in regs.iter().enumerate() {
                digits[reg] = picked[inv.apply(r)];
            }
            out[encode_index(&digits, &self.shape)] = self.amps[idx];
        }
        StateVector {
            amps: out,
            shape: self.shape.clone(),
        }
    }

    /// Projects onto the symmetric subspace of the listed registers:
    /// averages `permute_register_subset` over all of S_k. The result is
    /// generally unnormalized.
    pub fn symmetrize_registers(&self, regs: &[usize]) -> StateVector {
        let perms = Permutation::all(regs.len());
        let mut acc = CVector::zeros(self.dim());
        for sigma in &perms {
            acc += &self.permute_register_subset(regs, sigma).amps;
        }
        StateVector {
            amps: acc.scale(1.0 / perms.len() as f64),
            shape: self.shape.clone(),
        }
    }

    /// Applies `m` to the contiguous register span `[a, b)`.
    pub fn apply_matrix_to_span(&self, m: &CMatrix, a: usize, b: usize) -> StateVector {
        let mid: usize = self.shape[a..b].iter().product();
        assert_eq!(m.nrows(), mid, "operator does not fit the span");
        assert_eq!(m.ncols(), mid);
        let left: usize = self.shape[..a].iter().product();
        let right: usize = self.shape[b..].iter().product();
        let mut out = CVector::zeros(self.dim());
        let mut x = CVector::zeros(mid);
        for l in 0..left {
            for r in 0..right {
                for k in 0..mid {
                    x[k] = self.amps[(l * mid + k) * right + r];
                }
                let y = m * &x;
                for k in 0..mid {
                    out[(l * mid + k) * right + r] = y[k];
                }
            }
        }
        StateVector {
            amps: out,
            shape: self.shape.clone(),
        }
    }

    /// Applies `m` to span `[a, b)` controlled on register `c` (which must
    /// be two-dimensional and lie outside the span) being `|1>`.
    pub fn apply_controlled_to_span(&self, m: &CMatrix, c: usize, a: usize, b: usize) -> StateVector {
        assert_eq!(self.shape[c], 2, "control register must be a qubit");
        assert!(c < a || c >= b, "control register inside the target span");
        let mid: usize = self.shape[a..b].iter().product();
        assert_eq!(m.nrows(), mid);
        let left: usize = self.shape[..a].iter().product();
        let right: usize = self.shape[b..].iter().product();
        // stride of the control digit inside the left or right block index
        let ctrl_in_left = c < a;
        let stride: usize = if ctrl_in_left {
            self.shape[c + 1..a].iter().product()
        } else {
            self.shape[c + 1..].iter().product()
        };
        let mut out = self.amps.clone();
        let mut x = CVector::zeros(mid);
        for l in 0..left {
            for r in 0..right {
                let ctrl = if ctrl_in_left { l / stride % 2 } else { r / stride % 2 };
                if ctrl != 1 {
                    continue;
                }
                for k in 0..mid {
                    x[k] = self.amps[(l * mid + k) * right + r];
                }
                let y = m * &x;
                for k in 0..mid {
                    out[(l * mid + k) * right + r] = y[k];
                }
            }
        }
        StateVector {
            amps: out,
            shape: self.shape.clone(),
        }
    }

    /// Density matrix of the listed registers (ascending order), tracing
    /// out the rest.
    pub fn reduced_density(&self, keep: &[usize]) -> CMatrix {
        assert!(keep.windows(2).all(|w| w[0] < w[1]), "keep must be ascending");
        assert!(keep.iter().all(|&r| r < self.shape.len()));
        let keep_shape: Vec<usize> = keep.iter().map(|&r| self.shape[r]).collect();
        let kdim: usize = keep_shape.iter().product();
        let rest: Vec<usize> = (0..self.shape.len()).filter(|r| !keep.contains(r)).collect();
        let rest_shape: Vec<usize> = rest.iter().map(|&r| self.shape[r]).collect();
        let rdim: usize = rest_shape.iter().product::<usize>().max(1);
        let mut a = CMatrix::zeros(kdim, rdim);
        for idx in 0..self.dim() {
            let digits = decode_index(idx, &self.shape);
            let kd: Vec<usize> = keep.iter().map(|&r| digits[r]).collect();
            let rd: Vec<usize> = rest.iter().map(|&r| digits[r]).collect();
            let row = encode_index(&kd, &keep_shape);
            let col = if rest.is_empty() {
                0
            } else {
                encode_index(&rd, &rest_shape)
            };
            a[(row, col)] = self.amps[idx];
        }
        &a * a.adjoint()
    }
}

/// Schmidt spectrum of a pure state on `C^{d1} ⊗ C^{d2}`: squared singular
/// values of the coefficient matrix, clamped at the tolerance floor,
/// renormalized to sum 1, sorted descending.
pub fn schmidt_spectrum(state: &StateVector, d1: usize, d2: usize) -> Vec<f64> {
    assert_eq!(d1 * d2, state.dim(), "split does not match the dimension");
    let m = CMatrix::from_fn(d1, d2, |i, j| state.amplitudes()[i * d2 + j]);
    let svd = m.svd(false, false);
    let mut lam: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    for l in lam.iter_mut() {
        debug_assert!(*l >= crate::util::CLAMP_FLOOR);
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    let total: f64 = lam.iter().sum();
    assert!(total > 0.0);
    for l in lam.iter_mut() {
        *l /= total;
    }
    lam.sort_by(|a, b| b.total_cmp(a));
    lam
}
