//! Dense complex matrices and spectral helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry magnitude of `a - b`.
/// `m ⊗ m ⊗ .. ⊗ m` (`n` factors, n >= 1), leftmost factor most significant.
pub fn kron_power(m: &CMatrix, n: usize) -> CMatrix {
    assert!(n >= 1);
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kronecker(m);
    }
    out
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry magnitude of `U† U - I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && unitarity_deviation(u) <= tol
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Eigenvalues of a unitary (more generally, normal) matrix.
///
/// Diagonalizes the Hermitian part `H = (U + U†)/2`, then splits any
/// near-degenerate `H` eigenspace with the skew part `K = (U - U†)/(2i)`.
/// For normal `U` the two parts commute, so `h + i k` enumerates the
/// spectrum exactly.
pub fn unitary_eigenvalues(u: &CMatrix) -> Vec<C64> {
    let n = u.nrows();
    assert!(u.is_square(), "eigenvalues require a square matrix");
    let h = (u + u.adjoint()).scale(0.5);
    let k = (u - u.adjoint()).scale(0.5) * C64::new(0.0, -1.0);
    let (hvals, hvecs) = hermitian_eigen(&h);

    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (hvals[end] - hvals[start]).abs() < 1e-8 {
            end += 1;
        }
        let block = hvecs.columns(start, end - start).into_owned();
        if end - start == 1 {
            let kv = (block.adjoint() * &k * &block)[(0, 0)].re;
            out.push(C64::new(hvals[start], kv));
        } else {
            let ksub = block.adjoint() * &k * &block;
            let (kvals, _) = hermitian_eigen(&ksub);
            for kv in kvals {
                out.push(C64::new(hvals[start], kv));
            }
        }
        start = end;
    }
    out
}

/// Sorts a complex multiset canonically (by argument, then modulus).
pub fn sort_complex(mut zs: Vec<C64>) -> Vec<C64> {
    zs.sort_by(|a, b| {
        a.arg()
            .total_cmp(&b.arg())
            .then(a.norm().total_cmp(&b.norm()))
    });
    zs
}

/// Largest pointwise distance between two complex multisets after
/// canonical sorting.
pub fn multiset_distance(a: Vec<C64>, b: Vec<C64>) -> f64 {
    assert_eq!(a.len(), b.len());
    let a = sort_complex(a);
    let b = sort_complex(b);
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
