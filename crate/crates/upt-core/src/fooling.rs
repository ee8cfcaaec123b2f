//! Register-permutation symmetrizers and the fooling-state constructions.
//!
//! Everything here is exact: symmetrizer images of basis states are
//! integer amplitude vectors, combined over the integers, with a single
//! floating-point normalization at the very end.

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::perm::{encode_index, Permutation};
use crate::state::StateVector;
use crate::subspace::Subspace;
use num_complex::Complex64 as C64;

/// A standard Young tableau with 0-based entries (register labels).
#[derive(Debug, Clone)]
pub struct YoungTableau {
    rows: Vec<Vec<usize>>,
}

impl YoungTableau {
    /// Validates shape (nonincreasing rows), content (a bijection onto
    /// `0..n`), and standardness (rows and columns strictly increasing).
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = rows.iter().map(|r| r.len()).sum();
        if n == 0 {
            return Err(Error::InvalidArgument("empty tableau".into()));
        }
        let mut seen = vec![false; n];
        for r in &rows {
            for &e in r {
                if e >= n || seen[e] {
                    return Err(Error::InvalidArgument("filling is not a bijection".into()));
                }
                seen[e] = true;
            }
        }
        for w in rows.windows(2) {
            if w[1].len() > w[0].len() {
                return Err(Error::InvalidArgument("row lengths must not increase".into()));
            }
        }
        for r in &rows {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument("rows must increase".into()));
            }
        }
        for pair in rows.windows(2) {
            if pair[0].iter().zip(&pair[1]).any(|(above, below)| above >= below) {
                return Err(Error::InvalidArgument("columns must increase".into()));
            }
        }
        Ok(YoungTableau { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len()).collect()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows.first().map_or(0, |r| r.len());
        (0..width)
            .map(|j| self.rows.iter().filter_map(|r| r.get(j).copied()).collect())
            .collect()
    }

    /// All permutations preserving each row as a set.
    pub fn row_group(&self) -> Vec<Permutation> {
        subgroup_product(self.n(), &self.rows)
    }

    /// All permutations preserving each column as a set.
    pub fn column_group(&self) -> Vec<Permutation> {
        subgroup_product(self.n(), &self.columns())
    }
}

/// All permutations of `{0..n}` acting within the given disjoint blocks.
fn subgroup_product(n: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
    let mut out = vec![Permutation::identity(n)];
    for block in blocks {
        let locals = Permutation::all(block.len());
        let mut next = Vec::with_capacity(out.len() * locals.len());
        for base in &out {
            for loc in &locals {
                let mut map: Vec<usize> = (0..n).map(|i| base.apply(i)).collect();
                for (i, &pos) in block.iter().enumerate() {
                    map[pos] = base.apply(block[loc.apply(i)]);
                }
                next.push(Permutation::from_one_line(map));
            }
        }
        out = next;
    }
    out
}

fn permute_digits(digits: &[usize], sigma: &Permutation) -> Vec<usize> {
    let inv = sigma.inverse();
    (0..digits.len()).map(|r| digits[inv.apply(r)]).collect()
}

/// Exact amplitudes of `c_T |digits> = b_T a_T |digits>` as integers,
/// where `a_T` sums the row group and `b_T` sums the column group with
/// signs.
pub fn symmetrizer_on_basis(t: &YoungTableau, digits: &[usize], d: usize) -> Vec<i64> {
    let n = t.n();
    assert_eq!(digits.len(), n);
    assert!(digits.iter().all(|&x| x < d));
    let shape = vec![d; n];
    let mut amps = vec![0i64; d.pow(n as u32)];
    for p in t.row_group() {
        let y = permute_digits(digits, &p);
        for q in t.column_group() {
            let z = permute_digits(&y, &q);
            amps[encode_index(&z, &shape)] += q.sign();
        }
    }
    amps
}

/// Dense Young symmetrizer `c_T` on `(C^d)^{⊗n}`, `n <= 4`.
pub fn young_symmetrizer(t: &YoungTableau, d: usize) -> CMatrix {
    let n = t.n();
    assert!(n <= 4, "dense symmetrizer supported for n <= 4");
    let dim = d.pow(n as u32);
    let shape = vec![d; n];
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let digits = crate::perm::decode_index(col, &shape);
        let amps = symmetrizer_on_basis(t, &digits, d);
        for (row, &a) in amps.iter().enumerate() {
            if a != 0 {
                m[(row, col)] = C64::new(a as f64, 0.0);
            }
        }
    }
    m
}

/// The three invariant-state families on four registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoolingStateKind {
    /// Fully symmetric: the orbit sum of `|abcd>` over all of S_4.
    Sym4,
    /// Invariant line inside the (3,1)-isotypic copy: `v1 - v2 + v3`.
    Shape31,
    /// Product-decomposable representative of the (2,2) line:
    /// `psi4 + 2 (v1 - 2 v2)`, scaled by 1/3.
    Shape22Prime,
}

fn add_scaled(acc: &mut [i64], v: &[i64], c: i64) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

/// Exact integer numerators of the chosen invariant state on
/// `(C^d)^{⊗4}` with pairwise distinct single-register labels.
/// `Shape22Prime` numerators carry an overall factor 3.
pub fn g_invariant_numerators(kind: FoolingStateKind, idx: [usize; 4], d: usize) -> Vec<i64> {
    assert!(idx.iter().all(|&x| x < d));
    for i in 0..4 {
        for j in i + 1..4 {
            assert_ne!(idx[i], idx[j], "register labels must be distinct");
        }
    }
    let shape = vec![d; 4];
    let dim = d.pow(4);
    match kind {
        FoolingStateKind::Sym4 => {
            let mut amps = vec![0i64; dim];
            for sigma in Permutation::all(4) {
                let z = permute_digits(&idx, &sigma);
                amps[encode_index(&z, &shape)] += 1;
            }
            amps
        }
        FoolingStateKind::Shape31 => {
            let t1 = YoungTableau::new(vec![vec![0, 1, 2], vec![3]]).unwrap();
            let t2 = YoungTableau::new(vec![vec![0, 1, 3], vec![2]]).unwrap();
            let t3 = YoungTableau::new(vec![vec![0, 2, 3], vec![1]]).unwrap();
            let [a, b, c, e] = idx;
            let v1 = symmetrizer_on_basis(&t1, &[a, b, c, e], d);
            let v2 = symmetrizer_on_basis(&t2, &[a, b, e, c], d);
            let v3 = symmetrizer_on_basis(&t3, &[a, e, b, c], d);
            let mut amps = v1;
            add_scaled(&mut amps, &v2, -1);
            add_scaled(&mut amps, &v3, 1);
            amps
        }
        FoolingStateKind::Shape22Prime => {
            let s1 = YoungTableau::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
            let s2 = YoungTableau::new(vec![vec![0, 2], vec![1, 3]]).unwrap();
            let [a, b, c, e] = idx;
            let v1 = symmetrizer_on_basis(&s1, &[a, b, c, e], d);
            let v2 = symmetrizer_on_basis(&s2, &[a, c, b, e], d);
            let mut amps = g_invariant_numerators(FoolingStateKind::Sym4, idx, d);
            add_scaled(&mut amps, &v1, 2);
            add_scaled(&mut amps, &v2, -4);
            amps
        }
    }
}

/// Normalized invariant state with register shape `[d, d, d, d]`.
pub fn g_invariant_basis_state(kind: FoolingStateKind, idx: [usize; 4], d: usize) -> StateVector {
    let nums = g_invariant_numerators(kind, idx, d);
    let norm2: i64 = nums.iter().map(|x| x * x).sum();
    assert!(norm2 > 0);
    let scale = 1.0 / (norm2 as f64).sqrt();
    let amps = CVector::from_fn(nums.len(), |i, _| C64::new(nums[i] as f64 * scale, 0.0));
    StateVector::raw(amps, vec![d; 4])
}

/// Six-dimensional symmetric subspace of `C^d ⊗ C^d` spanned by
/// `(|ij> + |ji>)/sqrt(2)` over the pairs of four distinct labels.
/// Every state inside has product overlap at most 3/4.
pub fn counterexample_subspace(idx: [usize; 4], d: usize) -> Subspace {
    assert!(idx.iter().all(|&x| x < d));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let (u, v) = (idx[i], idx[j]);
            assert_ne!(u, v, "labels must be distinct");
            let mut vec = CVector::zeros(d * d);
            vec[u * d + v] = C64::new(r, 0.0);
            vec[v * d + u] = C64::new(r, 0.0);
            basis.push(vec);
        }
    }
    Subspace::new(vec![d, d], basis).expect("pair states are orthonormal")
}

/// The two-copy witness accepted by the product-test verifier with
/// probability one: the normalized S_4 orbit sum of `|uvwx>`, viewed as
/// two copies of a `C^d ⊗ C^d` system.
pub fn counterexample_state(idx: [usize; 4], d: usize) -> StateVector {
    g_invariant_basis_state(FoolingStateKind::Sym4, idx, d)
}

/// Expresses `w` in the integer basis `{v_i}` by solving the Gram system
/// exactly; returns the integer coefficient vector or None if `w` is
/// outside the span or the coefficients are not integers.
pub fn express_in_integer_basis(w: &[i64], basis: &[Vec<i64>]) -> Option<Vec<i64>> {
    let k = basis.len();
    assert!(k <= 3, "exact solver sized for k <= 3");
    let dot = |x: &[i64], y: &[i64]| -> i128 {
        x.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum()
    };
    let mut g = [[0i128; 3]; 3];
    let mut r = [0i128; 3];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = dot(&basis[i], &basis[j]);
        }
        r[i] = dot(&basis[i], w);
    }
    let det = det3(&g, k);
    if det == 0 {
        return None;
    }
    let mut coeffs = Vec::with_capacity(k);
    for col in 0..k {
        let mut gc = g;
        for row in 0..k {
            gc[row][col] = r[row];
        }
        let num = det3(&gc, k);
        if num % det != 0 {
            return None;
        }
        coeffs.push((num / det) as i64);
    }
    // verify the reconstruction (rules out w outside the span)
    let n = w.len();
    for i in 0..n {
        let mut s = 0i128;
        for (c, b) in coeffs.iter().zip(basis) {
            s += *c as i128 * b[i] as i128;
        }
        if s != w[i] as i128 {
            return None;
        }
    }
    Some(coeffs)
}

fn det3(m: &[[i128; 3]; 3], k: usize) -> i128 {
    match k {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!(),
    }
}

/// Exact register-permutation image of an integer amplitude vector on
/// `(C^d)^{⊗n}`.
pub fn permute_numerators(nums: &[i64], sigma: &Permutation, d: usize) -> Vec<i64> {
    let n = sigma.n();
    let shape = vec![d; n];
    assert_eq!(nums.len(), d.pow(n as u32));
    let inv = sigma.inverse();
    let mut out = vec![0i64; nums.len()];
    for (i, &a) in nums.iter().enumerate() {
        if a != 0 {
            let x = crate::perm::decode_index(i, &shape);
            let y: Vec<usize> = (0..n).map(|r| x[inv.apply(r)]).collect();
            out[encode_index(&y, &shape)] = a;
        }
    }
    out
}

/// Representation matrix of a register permutation in an integer basis:
/// column `j` holds the coefficients of `P_sigma v_j`.
pub fn representation_matrix(
    basis: &[Vec<i64>],
    sigma: &Permutation,
    d: usize,
) -> Option<Vec<Vec<i64>>> {
    let k = basis.len();
    let mut cols = Vec::with_capacity(k);
    for v in basis {
        let w = permute_numerators(v, sigma, d);
        cols.push(express_in_integer_basis(&w, basis)?);
    }
    // transpose: entry [i][j] = coefficient of v_i in the image of v_j
    Some((0..k).map(|i| (0..k).map(|j| cols[j][i]).collect()).collect())
}
