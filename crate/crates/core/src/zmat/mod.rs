//! Exact sparse integer linear algebra: Smith normal form, integer
//! kernels, lattice Hermite forms and mixed congruence solving.
//!
//! Everything here is deterministic: pivot choice is
//! smallest-magnitude with lowest `(row, col)` tie-break, and no
//! operation depends on hash iteration order.

mod hnf;
mod int;
mod snf;
mod solve;

pub use hnf::{snf_of_lattice, LatticeHnf, LatticeSnf};
pub use int::Int;
pub use snf::{
    image_divisors, integer_kernel, smith_normal_form, snf_full, SnfFull, SnfOptions, SnfResult,
};
pub use solve::{enumerate_null_space_mod, solve_mixed_congruences};

/// Sparse integer vector: `(index, value)` pairs, sorted by index,
/// values nonzero.
pub type SparseVec = Vec<(u32, Int)>;

/// `a + c * b` on sparse vectors.
pub fn vec_add_scaled(a: &SparseVec, b: &SparseVec, c: &Int) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.mul(&b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn vec_neg(a: &SparseVec) -> SparseVec {
    a.iter().map(|(i, v)| (*i, v.neg())).collect()
}

pub fn vec_get(a: &SparseVec, idx: u32) -> Int {
    match a.binary_search_by_key(&idx, |e| e.0) {
        Ok(p) => a[p].1.clone(),
        Err(_) => Int::ZERO,
    }
}

/// Sparse integer matrix, stored column-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i as u32, Int::ONE));
        }
        m
    }

    pub fn from_cols(rows: usize, cols: Vec<SparseVec>) -> IntMat {
        for c in &cols {
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(c.iter().all(|(i, v)| (*i as usize) < rows && !v.is_zero()));
        }
        IntMat { rows, cols: cols.len(), data: cols }
    }

    /// Dense construction helper (tests, small fixtures).
    pub fn from_dense(entries: &[Vec<i64>]) -> IntMat {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut data = vec![Vec::new(); cols];
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    data[j].push((i as u32, Int::from(v)));
                }
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.data[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        vec_get(&self.data[j], i as u32)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        let col = &mut self.data[j];
        match col.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(p) => {
                if v.is_zero() {
                    col.remove(p);
                } else {
                    col[p].1 = v;
                }
            }
            Err(p) => {
                if !v.is_zero() {
                    col.insert(p, (i as u32, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    /// All nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i as usize, j, v)))
    }

    pub fn transpose(&self) -> IntMat {
        let mut data = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            data[i].push((j as u32, v.clone()));
        }
        IntMat { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let data = other.data.iter().map(|col| self.mul_vec(col)).collect();
        IntMat { rows: self.rows, cols: other.cols, data }
    }

    /// `self * v` for a sparse vector.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = vec_add_scaled(&acc, &self.data[*j as usize], c);
        }
        acc
    }

    /// The diagonal entries, padded with zeros to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(20) {
            let row: Vec<String> = (0..self.cols.min(20)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
