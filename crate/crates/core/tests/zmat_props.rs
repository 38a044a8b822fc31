//! Property-based checks of the integer linear algebra layer:
//! transform reconstruction, divisor canonicity, kernel correctness
//! and congruence-solution substitution on random small matrices.

use proptest::prelude::*;

use relext_core::zmat::{
    image_divisors, integer_kernel, snf_full, solve_mixed_congruences, Int, IntMat, LatticeHnf,
    SnfOptions,
};

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows)
}

fn to_mat(entries: &[Vec<i64>]) -> IntMat {
    IntMat::from_dense(entries)
}

fn rank_of(m: &IntMat) -> usize {
    snf_full(m, SnfOptions::default()).rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// u · m · v equals the diagonal of divisors.
    #[test]
    fn snf_reconstruction(entries in dense(5, 6)) {
        let m = to_mat(&entries);
        let full = snf_full(&m, SnfOptions { want_u: true, want_uinv: true, want_v: true, want_vinv: true });
        let u = full.u.as_ref().unwrap();
        let v = full.v.as_ref().unwrap();
        let d = u.mul(&m).mul(v);
        let s = full.s.diagonal();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.len() { s[i].clone() } else { Int::ZERO };
                prop_assert_eq!(d.get(i, j), expect);
            }
        }
        // transforms are inverse to each other
        let uu = u.mul(full.uinv.as_ref().unwrap());
        let vv = v.mul(full.vinv.as_ref().unwrap());
        prop_assert_eq!(uu, IntMat::identity(m.rows()));
        prop_assert_eq!(vv, IntMat::identity(m.cols()));
    }

    /// Divisors form a divisibility chain and are invariant under row
    /// and column permutations.
    #[test]
    fn snf_divisor_chain_and_permutation_invariance(entries in dense(4, 5), seed in 0u64..1000) {
        let m = to_mat(&entries);
        let s = image_divisors(&m);
        for w in s.windows(2) {
            prop_assert!(w[1].div_rem_euclid(&w[0]).1.is_zero());
        }
        // permute rows and columns deterministically from the seed
        let mut rows: Vec<usize> = (0..entries.len()).collect();
        let mut cols: Vec<usize> = (0..entries[0].len()).collect();
        let (nr, nc) = (rows.len(), cols.len());
        rows.rotate_left((seed as usize) % nr);
        cols.rotate_left((seed as usize / 7) % nc);
        let permuted: Vec<Vec<i64>> =
            rows.iter().map(|&i| cols.iter().map(|&j| entries[i][j]).collect()).collect();
        prop_assert_eq!(s, image_divisors(&to_mat(&permuted)));
    }

    /// Kernel columns annihilate, are independent, and have the right
    /// count (cols − rank).
    #[test]
    fn kernel_is_a_basis(entries in dense(4, 6)) {
        let m = to_mat(&entries);
        let k = integer_kernel(&m);
        prop_assert_eq!(k.cols(), m.cols() - rank_of(&m));
        for j in 0..k.cols() {
            prop_assert!(m.mul_vec(k.col(j)).is_empty());
        }
        prop_assert_eq!(rank_of(&k), k.cols());
    }

    /// A solution returned by the mixed congruence solver substitutes
    /// back into every row.
    #[test]
    fn solve_substitutes(entries in dense(4, 4),
                         x0 in prop::collection::vec(-4i64..=4, 4),
                         moduli in prop::collection::vec(prop::sample::select(vec![0u64, 2, 3, 4, 6]), 4)) {
        let m = to_mat(&entries);
        // manufacture a consistent right-hand side from a known solution
        let b: Vec<Int> = (0..4)
            .map(|i| {
                let mut acc = 0i64;
                for j in 0..4 {
                    acc += entries[i][j] * x0[j];
                }
                Int::from(acc)
            })
            .collect();
        let sol = solve_mixed_congruences(&m, &moduli, &b);
        prop_assert!(sol.is_some(), "a consistent system must be solvable");
        let sol = sol.unwrap();
        for i in 0..4 {
            let mut acc = Int::ZERO;
            for j in 0..4 {
                acc = acc.add(&m.get(i, j).mul(&sol[j]));
            }
            let diff = acc.sub(&b[i]);
            let ok = if moduli[i] == 0 {
                diff.is_zero()
            } else {
                diff.div_rem_euclid(&Int::from(moduli[i])).1.is_zero()
            };
            prop_assert!(ok, "row {} not satisfied", i);
        }
    }

    /// Lattice reduction is idempotent and reduction of a basis vector
    /// is zero.
    #[test]
    fn lattice_reduction(entries in dense(5, 3)) {
        let m = to_mat(&entries);
        let mut lat = LatticeHnf::new(5);
        for j in 0..m.cols() {
            lat.add_column(m.col(j).clone());
        }
        lat.normalize();
        let densify = |col: &relext_core::zmat::SparseVec| {
            let mut x = vec![Int::ZERO; 5];
            for (i, v) in col {
                x[*i as usize] = v.clone();
            }
            x
        };
        for j in 0..m.cols() {
            let r = lat.reduce_vector(densify(m.col(j)));
            prop_assert!(r.iter().all(|v| v.is_zero()));
        }
        let v = vec![Int::from(3), Int::ZERO, Int::from(-5), Int::ZERO, Int::ONE];
        let r1 = lat.reduce_vector(v);
        let r2 = lat.reduce_vector(r1.clone());
        prop_assert_eq!(r1, r2);
    }
}
