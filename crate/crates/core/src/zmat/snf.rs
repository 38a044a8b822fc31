//! Smith normal form over the integers with unimodular transforms.

use std::collections::{BTreeMap, BTreeSet};

use super::{Int, IntMat, SparseVec};

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal with a
/// non-negative divisibility chain `d1 | d2 | ...`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMat,
    pub s: IntMat,
    pub v: IntMat,
}

/// Which transforms to accumulate.
#[derive(Debug, Clone, Copy, Default)]
pub struct SnfOptions {
    pub want_u: bool,
    pub want_uinv: bool,
    pub want_v: bool,
    pub want_vinv: bool,
}

#[derive(Debug)]
pub struct SnfFull {
    pub s: IntMat,
    pub rank: usize,
    pub u: Option<IntMat>,
    pub uinv: Option<IntMat>,
    pub v: Option<IntMat>,
    pub vinv: Option<IntMat>,
}

struct Work {
    nr: usize,
    nc: usize,
    rows: Vec<BTreeMap<u32, Int>>,
    /// col -> set of rows with a nonzero entry
    col_index: Vec<BTreeSet<u32>>,
    u: Option<Vec<BTreeMap<u32, Int>>>,    // row-major
    uinv: Option<Vec<BTreeMap<u32, Int>>>, // column-major
    v: Option<Vec<BTreeMap<u32, Int>>>,    // column-major
    vinv: Option<Vec<BTreeMap<u32, Int>>>, // row-major
}

fn ident_maps(n: usize) -> Vec<BTreeMap<u32, Int>> {
    (0..n).map(|i| BTreeMap::from([(i as u32, Int::ONE)])).collect()
}

/// `dst += c * src` on index->value maps.
fn map_add_scaled(maps: &mut [BTreeMap<u32, Int>], dst: usize, src: usize, c: &Int) {
    if c.is_zero() || dst == src {
        return;
    }
    let updates: Vec<(u32, Int)> = maps[src].iter().map(|(k, v)| (*k, c.mul(v))).collect();
    for (k, dv) in updates {
        let cur = maps[dst].remove(&k).unwrap_or(Int::ZERO);
        let nv = cur.add(&dv);
        if !nv.is_zero() {
            maps[dst].insert(k, nv);
        }
    }
}

fn map_negate(maps: &mut [BTreeMap<u32, Int>], i: usize) {
    let m = std::mem::take(&mut maps[i]);
    maps[i] = m.into_iter().map(|(k, v)| (k, v.neg())).collect();
}

impl Work {
    fn new(m: &IntMat, opts: SnfOptions) -> Work {
        let nr = m.rows();
        let nc = m.cols();
        let mut rows = vec![BTreeMap::new(); nr];
        let mut col_index = vec![BTreeSet::new(); nc];
        for (i, j, v) in m.entries() {
            rows[i].insert(j as u32, v.clone());
            col_index[j].insert(i as u32);
        }
        Work {
            nr,
            nc,
            rows,
            col_index,
            u: opts.want_u.then(|| ident_maps(nr)),
            uinv: opts.want_uinv.then(|| ident_maps(nr)),
            v: opts.want_v.then(|| ident_maps(nc)),
            vinv: opts.want_vinv.then(|| ident_maps(nc)),
        }
    }

    fn get(&self, i: usize, j: usize) -> Int {
        self.rows[i].get(&(j as u32)).cloned().unwrap_or(Int::ZERO)
    }

    /// row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        let updates: Vec<(u32, Int)> = self.rows[j].iter().map(|(k, v)| (*k, c.mul(v))).collect();
        for (k, dv) in updates {
            let cur = self.rows[i].remove(&k).unwrap_or(Int::ZERO);
            let nv = cur.add(&dv);
            if nv.is_zero() {
                self.col_index[k as usize].remove(&(i as u32));
            } else {
                self.rows[i].insert(k, nv);
                self.col_index[k as usize].insert(i as u32);
            }
        }
        if let Some(u) = &mut self.u {
            map_add_scaled(u, i, j, c);
        }
        if let Some(uinv) = &mut self.uinv {
            let nc = c.neg();
            map_add_scaled(uinv, j, i, &nc);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let cols: BTreeSet<u32> =
            self.rows[i].keys().chain(self.rows[j].keys()).copied().collect();
        self.rows.swap(i, j);
        for c in cols {
            let ci = &mut self.col_index[c as usize];
            let has_i = self.rows[i].contains_key(&c);
            let has_j = self.rows[j].contains_key(&c);
            if has_i {
                ci.insert(i as u32);
            } else {
                ci.remove(&(i as u32));
            }
            if has_j {
                ci.insert(j as u32);
            } else {
                ci.remove(&(j as u32));
            }
        }
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(uinv) = &mut self.uinv {
            uinv.swap(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        let m = std::mem::take(&mut self.rows[i]);
        self.rows[i] = m.into_iter().map(|(k, v)| (k, v.neg())).collect();
        if let Some(u) = &mut self.u {
            map_negate(u, i);
        }
        if let Some(uinv) = &mut self.uinv {
            map_negate(uinv, i);
        }
    }

    /// col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        let src_rows: Vec<u32> = self.col_index[j].iter().copied().collect();
        for r in src_rows {
            let dv = c.mul(&self.rows[r as usize][&(j as u32)]);
            let cur = self.rows[r as usize].remove(&(i as u32)).unwrap_or(Int::ZERO);
            let nv = cur.add(&dv);
            if nv.is_zero() {
                self.col_index[i].remove(&r);
            } else {
                self.rows[r as usize].insert(i as u32, nv);
                self.col_index[i].insert(r);
            }
        }
        if let Some(v) = &mut self.v {
            map_add_scaled(v, i, j, c);
        }
        if let Some(vinv) = &mut self.vinv {
            let nc = c.neg();
            map_add_scaled(vinv, j, i, &nc);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let rows: BTreeSet<u32> =
            self.col_index[i].iter().chain(self.col_index[j].iter()).copied().collect();
        for r in rows {
            let row = &mut self.rows[r as usize];
            let vi = row.remove(&(i as u32));
            let vj = row.remove(&(j as u32));
            if let Some(v) = vj {
                row.insert(i as u32, v);
            }
            if let Some(v) = vi {
                row.insert(j as u32, v);
            }
        }
        self.col_index.swap(i, j);
        if let Some(v) = &mut self.v {
            v.swap(i, j);
        }
        if let Some(vinv) = &mut self.vinv {
            vinv.swap(i, j);
        }
    }

    /// Smallest-magnitude nonzero entry in the submatrix `(t.., t..)`,
    /// lowest `(row, col)` tie-break.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(Int, usize, usize)> = None;
        for i in t..self.nr {
            for (j, v) in self.rows[i].range(t as u32..) {
                let a = v.abs();
                let better = match &best {
                    None => true,
                    Some((ba, _, _)) => a < *ba,
                };
                if better {
                    if a.is_one() {
                        return Some((i, *j as usize));
                    }
                    best = Some((a, i, *j as usize));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn to_intmat_rows(maps: &[BTreeMap<u32, Int>], cols: usize) -> IntMat {
        let mut data = vec![SparseVec::new(); cols];
        for (i, row) in maps.iter().enumerate() {
            for (j, v) in row {
                data[*j as usize].push((i as u32, v.clone()));
            }
        }
        IntMat::from_cols(maps.len(), data)
    }

    fn to_intmat_cols(maps: &[BTreeMap<u32, Int>], rows: usize) -> IntMat {
        let data = maps
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, v.clone())).collect())
            .collect();
        IntMat::from_cols(rows, data)
    }
}

/// Full SNF driver with selectable transforms.
pub fn snf_full(m: &IntMat, opts: SnfOptions) -> SnfFull {
    let mut w = Work::new(m, opts);
    let bound = w.nr.min(w.nc);
    let mut t = 0;
    while t < bound {
        let Some((pr, pc)) = w.find_pivot(t) else { break };
        w.row_swap(t, pr);
        w.col_swap(t, pc);
        'pivot: loop {
            if w.get(t, t).is_negative() {
                w.row_negate(t);
            }
            let p = w.get(t, t);
            // clear column t
            let below: Vec<u32> =
                w.col_index[t].iter().copied().filter(|&r| r as usize != t).collect();
            for r in below {
                let a = w.get(r as usize, t);
                if a.is_zero() {
                    continue;
                }
                let (q, rem) = a.div_rem_euclid(&p);
                w.row_add(r as usize, t, &q.neg());
                if !rem.is_zero() {
                    // remainder is strictly smaller than the pivot
                    w.row_swap(t, r as usize);
                    continue 'pivot;
                }
            }
            // clear row t
            let right: Vec<u32> =
                w.rows[t].keys().copied().filter(|&c| c as usize != t).collect();
            for c in right {
                let a = w.get(t, c as usize);
                if a.is_zero() {
                    continue;
                }
                let (q, rem) = a.div_rem_euclid(&p);
                w.col_add(c as usize, t, &q.neg());
                if !rem.is_zero() {
                    w.col_swap(t, c as usize);
                    continue 'pivot;
                }
            }
            // divisibility of the trailing submatrix
            let mut offender = None;
            'scan: for i in (t + 1)..w.nr {
                for (j, v) in w.rows[i].range((t + 1) as u32..) {
                    if !p.divides(v) {
                        offender = Some((i, *j as usize));
                        break 'scan;
                    }
                }
            }
            match offender {
                Some((i, _)) => {
                    w.row_add(t, i, &Int::ONE);
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        t += 1;
    }
    let rank = t;
    let mut s = IntMat::zeros(w.nr, w.nc);
    for i in 0..rank {
        s.set(i, i, w.get(i, i));
    }
    SnfFull {
        s,
        rank,
        u: w.u.take().map(|u| Work::to_intmat_rows(&u, w.nr)),
        uinv: w.uinv.take().map(|u| Work::to_intmat_cols(&u, w.nr)),
        v: w.v.take().map(|v| Work::to_intmat_cols(&v, w.nc)),
        vinv: w.vinv.take().map(|v| Work::to_intmat_rows(&v, w.nc)),
    }
}

/// Smith normal form `U * M * V = S`.
pub fn smith_normal_form(m: &IntMat) -> SnfResult {
    let full = snf_full(m, SnfOptions { want_u: true, want_v: true, ..Default::default() });
    SnfResult { u: full.u.unwrap(), s: full.s, v: full.v.unwrap() }
}

/// Basis of `{x : Mx = 0}` as matrix columns. Deterministic: columns
/// are the trailing columns of the SNF column transform, sign-fixed so
/// the lowest-index nonzero entry is positive.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    let full = snf_full(m, SnfOptions { want_v: true, ..Default::default() });
    let v = full.v.unwrap();
    let mut cols = Vec::new();
    for j in full.rank..m.cols() {
        let mut c = v.col(j).clone();
        if let Some((_, lead)) = c.first() {
            if lead.is_negative() {
                c = super::vec_neg(&c);
            }
        }
        cols.push(c);
    }
    IntMat::from_cols(m.cols(), cols)
}

/// The nonzero diagonal entries of the SNF.
pub fn image_divisors(m: &IntMat) -> Vec<Int> {
    let full = snf_full(m, SnfOptions::default());
    (0..full.rank).map(|i| full.s.get(i, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_reconstruction(m: &IntMat) {
        let r = smith_normal_form(m);
        assert_eq!(r.u.mul(m).mul(&r.v), r.s, "U*M*V != S");
        let d = r.s.diagonal();
        for w in d.windows(2) {
            if !w[1].is_zero() {
                assert!(w[0].divides(&w[1]), "divisibility chain broken");
            }
        }
    }

    #[test]
    fn snf_hand_example() {
        // hand elimination: gcd 2, |det| = 8 -> diag (2, 4)
        let m = IntMat::from_dense(&[vec![2, 4], vec![6, 8]]);
        let r = smith_normal_form(&m);
        assert_eq!(r.s.diagonal(), vec![Int::from(2), Int::from(4)]);
        check_reconstruction(&m);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntMat::zeros(3, 4);
        assert_eq!(image_divisors(&z), Vec::<Int>::new());
        let id = IntMat::identity(3);
        assert_eq!(smith_normal_form(&id).s.diagonal(), vec![Int::ONE; 3]);
    }

    #[test]
    fn kernel_examples() {
        let m = IntMat::from_dense(&[vec![1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        // (1, -1) up to sign, normalized with positive lead
        assert_eq!(k.get(0, 0), Int::ONE);
        assert_eq!(k.get(1, 0), Int::from(-1));

        let z = IntMat::zeros(2, 3);
        assert_eq!(integer_kernel(&z).cols(), 3);

        let m2 = IntMat::from_dense(&[vec![2]]);
        assert_eq!(integer_kernel(&m2).cols(), 0);
        assert_eq!(image_divisors(&m2), vec![Int::from(2)]);
    }

    #[test]
    fn kernel_columns_annihilate() {
        let m = IntMat::from_dense(&[vec![2, 4, 1], vec![0, 6, 3]]);
        let k = integer_kernel(&m);
        assert!(m.mul(&k).is_zero());
        check_reconstruction(&m);
    }
}
