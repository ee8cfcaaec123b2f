//! Symmetric group elements and their action on register systems.

use crate::matrix::CMatrix;
use num_complex::Complex64 as C64;

/// A permutation of `{0, .., n-1}` in one-line notation: `map[i] = sigma(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds from one-line notation; panics unless `map` is a bijection.
    pub fn from_one_line(map: Vec<usize>) -> Self {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            assert!(v < n && !seen[v], "not a permutation: {map:?}");
            seen[v] = true;
        }
        Permutation { map }
    }

    /// Builds from disjoint cycles over `{0, .., n-1}`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                let from = cyc[w];
                let to = cyc[(w + 1) % cyc.len()];
                assert!(from < n && map[from] == from, "cycles overlap or exceed n");
                map[from] = to;
            }
        }
        Permutation { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            map: (0..self.n()).map(|i| self.map[other.map[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Cycles in canonical order: each starts at its smallest element,
    /// cycles sorted by starting element. Includes fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut j = self.map[s];
            while j != s {
                seen[j] = true;
                cyc.push(j);
                j = self.map[j];
            }
            out.push(cyc);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths sorted descending (a partition of n).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All n! elements of S_n in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { map: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Digits of `index` in the mixed-radix system given by `shape`
/// (register 0 most significant).
pub fn decode_index(mut index: usize, shape: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; shape.len()];
    for (r, &d) in shape.iter().enumerate().rev() {
        digits[r] = index % d;
        index /= d;
    }
    digits
}

pub fn encode_index(digits: &[usize], shape: &[usize]) -> usize {
    let mut idx = 0;
    for (r, &d) in shape.iter().enumerate() {
        debug_assert!(digits[r] < d);
        idx = idx * d + digits[r];
    }
    idx
}

/// The operator `P_sigma` on `(C^d)^{⊗n}` defined by
/// `P_sigma |i_1 .. i_n> = |i_{sigma^{-1}(1)} .. i_{sigma^{-1}(n)}>`.
pub fn permutation_operator(sigma: &Permutation, d: usize) -> CMatrix {
    let n = sigma.n();
    let dim = d.pow(n as u32);
    let shape = vec![d; n];
    let inv = sigma.inverse();
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let x = decode_index(col, &shape);
        let y: Vec<usize> = (0..n).map(|r| x[inv.apply(r)]).collect();
        m[(encode_index(&y, &shape), col)] = C64::new(1.0, 0.0);
    }
    m
}

/// Projector onto the symmetric subspace of `(C^d)^{⊗k}`:
/// the average of all `P_sigma` over `S_k`.
pub fn symmetric_projector(d: usize, k: usize) -> CMatrix {
    let dim = d.pow(k as u32);
    let mut m = CMatrix::zeros(dim, dim);
    let perms = Permutation::all(k);
    let w = C64::new(1.0 / perms.len() as f64, 0.0);
    for sigma in &perms {
        m += permutation_operator(sigma, d) * w;
    }
    m
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    num / den
}

/// Dimension of the symmetric subspace of `(C^d)^{⊗k}`.
pub fn symmetric_subspace_dim(d: usize, k: usize) -> u128 {
    binomial(d + k - 1, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs_diff;

    #[test]
    fn compose_and_inverse() {
        let s = Permutation::from_cycles(4, &[&[0, 1, 2]]);
        let t = Permutation::from_cycles(4, &[&[2, 3]]);
        let st = s.compose(&t);
        for i in 0..4 {
            assert_eq!(st.apply(i), s.apply(t.apply(i)));
        }
        let e = s.compose(&s.inverse());
        assert_eq!(e, Permutation::identity(4));
    }

    #[test]
    fn cycle_type_and_sign() {
        let s = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(s.cycle_type(), vec![3, 2]);
        assert_eq!(s.sign(), -1);
        assert_eq!(s.num_cycles(), 2);
        assert_eq!(Permutation::identity(3).cycle_type(), vec![1, 1, 1]);
    }

    #[test]
    fn all_has_factorial_size() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
    }

    #[test]
    fn operator_is_homomorphism() {
        let d = 2;
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                let lhs = permutation_operator(&s, d) * permutation_operator(&t, d);
                let rhs = permutation_operator(&s.compose(&t), d);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn operator_trace_counts_cycles() {
        let d = 3;
        for s in Permutation::all(4) {
            let tr = permutation_operator(&s, d).trace();
            let expect = (d as f64).powi(s.num_cycles() as i32);
            assert!((tr.re - expect).abs() < 1e-9 && tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_projector_idempotent_with_known_trace() {
        for (d, k) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
            let p = symmetric_projector(d, k);
            assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
            assert!(max_abs_diff(&p, &p.adjoint()) < 1e-12);
            let tr = p.trace().re;
            assert!((tr - symmetric_subspace_dim(d, k) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn swap_projector_trace_matches_closed_form() {
        // d = 2, k = 2: symmetric subspace has dimension 3
        let p = symmetric_projector(2, 2);
        assert!((p.trace().re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn decode_encode_roundtrip() {
        let shape = [2, 3, 4];
        for idx in 0..24 {
            assert_eq!(encode_index(&decode_index(idx, &shape), &shape), idx);
        }
    }
}
