//! Mixed integer congruence systems and mod-d null space enumeration.

use super::snf::{snf_full, SnfOptions};
use super::{integer_kernel, Int, IntMat, LatticeHnf, SparseVec};

/// Solve `(Mx)_i ≡ b_i (mod moduli_i)` for all rows, where modulus 0
/// means equality over the integers.
///
/// Returns a deterministic canonical solution (reduced to the least
/// non-negative representative against the homogeneous solution
/// lattice), or `None` when the system is inconsistent.
pub fn solve_mixed_congruences(m: &IntMat, moduli: &[u64], b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(moduli.len(), m.rows());
    assert_eq!(b.len(), m.rows());
    let n = m.cols();
    let a = augment(m, moduli);
    let full = snf_full(&a, SnfOptions { want_u: true, want_v: true, ..Default::default() });
    let u = full.u.unwrap();
    let v = full.v.unwrap();

    // y solves S y = U b
    let bs: SparseVec = b
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as u32, x.clone()))
        .collect();
    let ub = u.mul_vec(&bs);
    let mut ub_dense = vec![Int::ZERO; a.rows()];
    for (i, x) in ub {
        ub_dense[i as usize] = x;
    }
    let mut y: SparseVec = Vec::new();
    for (i, val) in ub_dense.iter().enumerate() {
        if i < full.rank {
            let s = full.s.get(i, i);
            if !s.divides(val) {
                return None;
            }
            let q = val.exact_div(&s);
            if !q.is_zero() {
                y.push((i as u32, q));
            }
        } else if !val.is_zero() {
            return None;
        }
    }
    let z = v.mul_vec(&y);
    let mut x = vec![Int::ZERO; n];
    for (i, val) in z {
        if (i as usize) < n {
            x[i as usize] = val;
        }
    }

    // canonicalize against the homogeneous lattice
    let hom = homogeneous_lattice(m, moduli);
    Some(hom.reduce_vector(x))
}

/// Hermite form of the lattice of homogeneous solutions of the system
/// (projections to the `x` coordinates of the kernel of `[M | D]`).
fn homogeneous_lattice(m: &IntMat, moduli: &[u64]) -> LatticeHnf {
    let n = m.cols();
    let a = augment(m, moduli);
    let ker = integer_kernel(&a);
    let mut h = LatticeHnf::new(n);
    for j in 0..ker.cols() {
        let proj: SparseVec =
            ker.col(j).iter().filter(|(i, _)| (*i as usize) < n).cloned().collect();
        if !proj.is_empty() {
            h.add_column(proj);
        }
    }
    h.normalize();
    h
}

fn augment(m: &IntMat, moduli: &[u64]) -> IntMat {
    let mut cols: Vec<SparseVec> = (0..m.cols()).map(|j| m.col(j).clone()).collect();
    for (i, &md) in moduli.iter().enumerate() {
        if md != 0 {
            cols.push(vec![(i as u32, Int::from(md))]);
        }
    }
    IntMat::from_cols(m.rows(), cols)
}

/// The group `{x ∈ (Z/d)^n : Mx ≡ 0 (mod d)}`, enumerable in a fixed
/// deterministic order.
pub struct NullSpaceMod {
    n: usize,
    d: u64,
    /// triangular basis columns (ascending pivot row), diag divides d
    basis: Vec<SparseVec>,
    /// d / diag per basis column
    ranges: Vec<u64>,
}

pub fn enumerate_null_space_mod(m: &IntMat, d: u64) -> NullSpaceMod {
    assert!(d > 0);
    let n = m.cols();
    let moduli = vec![d; m.rows()];
    let mut h = homogeneous_lattice(m, &moduli);
    // d*Z^n is always a sublattice of the solutions
    for i in 0..n {
        h.add_column(vec![(i as u32, Int::from(d))]);
    }
    h.normalize();
    assert_eq!(h.rank(), n, "solution lattice must have full rank");
    let mut basis = Vec::with_capacity(n);
    let mut ranges = Vec::with_capacity(n);
    for r in h.pivot_rows().collect::<Vec<_>>() {
        let col = h.pivot_column(r).unwrap().clone();
        let lead = col[0].1.to_i64().expect("lead divides d") as u64;
        debug_assert_eq!(d % lead, 0);
        ranges.push(d / lead);
        basis.push(col);
    }
    NullSpaceMod { n, d, basis, ranges }
}

impl NullSpaceMod {
    pub fn count(&self) -> u128 {
        self.ranges.iter().map(|&r| r as u128).product()
    }

    /// All solutions as coordinate vectors mod d, in mixed-radix order.
    pub fn iter(&self) -> NullSpaceIter<'_> {
        NullSpaceIter { ns: self, counter: vec![0; self.n], done: false }
    }
}

pub struct NullSpaceIter<'a> {
    ns: &'a NullSpaceMod,
    counter: Vec<u64>,
    done: bool,
}

impl Iterator for NullSpaceIter<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let ns = self.ns;
        let mut x = vec![0u64; ns.n];
        for (k, col) in ns.basis.iter().enumerate() {
            let c = self.counter[k];
            if c == 0 {
                continue;
            }
            for (i, v) in col {
                let vi = v.to_i64().expect("basis entries fit i64").rem_euclid(ns.d as i64) as u64;
                x[*i as usize] = (x[*i as usize] + c % ns.d * vi) % ns.d;
            }
        }
        // advance mixed-radix counter
        let mut k = 0;
        loop {
            if k == ns.n {
                self.done = true;
                break;
            }
            self.counter[k] += 1;
            if self.counter[k] < ns.ranges[k] {
                break;
            }
            self.counter[k] = 0;
            k += 1;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_example() {
        // x ≡ 1 mod 2, x ≡ 0 mod 3 -> canonical solution 3
        let m = IntMat::from_dense(&[vec![1], vec![1]]);
        let b = vec![Int::ONE, Int::ZERO];
        let x = solve_mixed_congruences(&m, &[2, 3], &b).unwrap();
        assert_eq!(x, vec![Int::from(3)]);
    }

    #[test]
    fn inconsistent() {
        // 0*x ≡ 1 mod 2
        let m = IntMat::from_dense(&[vec![0]]);
        assert!(solve_mixed_congruences(&m, &[2], &[Int::ONE]).is_none());
    }

    #[test]
    fn empty_system() {
        let m = IntMat::zeros(0, 3);
        let x = solve_mixed_congruences(&m, &[], &[]).unwrap();
        assert_eq!(x, vec![Int::ZERO; 3]);
    }

    #[test]
    fn exact_rows() {
        // x + y = 5 over Z, x ≡ 0 mod 2
        let m = IntMat::from_dense(&[vec![1, 1], vec![1, 0]]);
        let x = solve_mixed_congruences(&m, &[0, 2], &[Int::from(5), Int::ZERO]).unwrap();
        assert_eq!(x[0].add(&x[1]), Int::from(5));
        assert!(Int::from(2).divides(&x[0]));
    }

    #[test]
    fn null_space_mod_counts() {
        // x + y ≡ 0 mod 4: 4 solutions in (Z/4)^2... per free y
        let m = IntMat::from_dense(&[vec![1, 1]]);
        let ns = enumerate_null_space_mod(&m, 4);
        assert_eq!(ns.count(), 4);
        let all: Vec<_> = ns.iter().collect();
        assert_eq!(all.len(), 4);
        for x in &all {
            assert_eq!((x[0] + x[1]) % 4, 0);
        }
        // all distinct
        let set: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), 4);
    }
}
