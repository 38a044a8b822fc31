//! Normalized bar complexes, chain maps, mapping cones and integral /
//! coefficient (co)homology in degrees ≤ 2.
//!
//! Degree-n basis of the bar complex of G: n-tuples of non-identity
//! elements in lexicographic index order; tuples acquiring an identity
//! entry are deleted (normalization). The mapping cone of a
//! homomorphism f: Γ → G has degree-n basis C_n(G) ⊕ C_{n−1}(Γ), G-part
//! first.
//!
//! Cone sign convention: d(x, y) = (dx − F(y), −dy), where F is the
//! chain map of f. On cochain pairs (c, w) ∈ C²(G;A) ⊕ C¹(Γ;A) read
//! through the dictionary φ(x, y) = c(x) − w(y), this makes
//! "cocycle ⟺ δc = 0 and f*c = δw" and "coboundary ⟺ (δu, u∘f)"
//! come out exactly; all cocycle handling elsewhere cites this
//! convention rather than re-choosing one.

use std::collections::BTreeMap;

use crate::abgrp::{gcd, AbElt, AbGroup, AbMap};
use crate::grp::{Group, Hom};
use crate::zmat::{
    snf_full, snf_of_lattice, Int, IntMat, LatticeHnf, SnfOptions, SparseVec,
};
use crate::{Config, Error, Result};

/// Chain complex of free abelian groups, degrees 0..=3.
pub struct ChainComplex {
    sizes: [usize; 4],
    /// d[n-1] is the boundary C_n → C_{n−1}
    d: Vec<IntMat>,
}

impl ChainComplex {
    /// Checked construction: shapes line up and d ∘ d = 0 exactly.
    pub fn new(sizes: [usize; 4], d: Vec<IntMat>) -> Result<ChainComplex> {
        assert_eq!(d.len(), 3);
        for n in 1..=3 {
            if d[n - 1].rows() != sizes[n - 1] || d[n - 1].cols() != sizes[n] {
                return Err(Error::Internal(format!("boundary {n} has wrong shape")));
            }
        }
        for n in 1..=2 {
            if !d[n - 1].mul(&d[n]).is_zero() {
                return Err(Error::Internal(format!("d_{n} ∘ d_{} ≠ 0", n + 1)));
            }
        }
        Ok(ChainComplex { sizes, d })
    }

    pub fn rank(&self, n: usize) -> usize {
        self.sizes[n]
    }

    /// The boundary `d_n: C_n → C_{n−1}`, n ∈ 1..=3.
    pub fn boundary(&self, n: usize) -> &IntMat {
        &self.d[n - 1]
    }
}

/// Rank of degree n of the normalized bar complex of a group of the
/// given order.
pub fn bar_rank(order: usize, n: usize) -> usize {
    let k = order - 1;
    match n {
        0 => 1,
        _ => k.pow(n as u32),
    }
}

/// Index of the basis tuple in degree n (entries are non-identity
/// element indices).
pub fn bar_index(order: usize, tuple: &[u32]) -> usize {
    let k = order - 1;
    tuple.iter().fold(0usize, |acc, &g| {
        debug_assert!(g != 0);
        acc * k + (g as usize - 1)
    })
}

fn accumulate(col: &mut BTreeMap<u32, i64>, idx: usize, coeff: i64) {
    let e = col.entry(idx as u32).or_insert(0);
    *e += coeff;
    if *e == 0 {
        col.remove(&(idx as u32));
    }
}

fn finish(col: BTreeMap<u32, i64>) -> SparseVec {
    col.into_iter().map(|(i, v)| (i, Int::from(v))).collect()
}

/// Normalized bar complex of `g` with trivial coefficients, degrees
/// 0..=3.
pub fn bar_complex(g: &Group, cfg: &Config) -> Result<ChainComplex> {
    if g.order() > cfg.bar_cap {
        return Err(Error::SizeLimit { cap: cfg.bar_cap, reached: g.order() });
    }
    let m = g.order();
    let k = m - 1;
    let sizes = [1, k, k * k, k * k * k];

    // d₁[g] = [] − [] = 0
    let d1 = IntMat::zeros(1, k);

    // d₂[g|h] = [h] − [gh] + [g]
    let mut cols2 = Vec::with_capacity(k * k);
    for a in 1..m as u32 {
        for b in 1..m as u32 {
            let mut col = BTreeMap::new();
            accumulate(&mut col, bar_index(m, &[b]), 1);
            let ab = g.mul(a, b);
            if ab != 0 {
                accumulate(&mut col, bar_index(m, &[ab]), -1);
            }
            accumulate(&mut col, bar_index(m, &[a]), 1);
            cols2.push(finish(col));
        }
    }
    let d2 = IntMat::from_cols(k, cols2);

    // d₃[g|h|l] = [h|l] − [gh|l] + [g|hl] − [g|h]
    let mut cols3 = Vec::with_capacity(k * k * k);
    for a in 1..m as u32 {
        for b in 1..m as u32 {
            let ab = g.mul(a, b);
            for c in 1..m as u32 {
                let mut col = BTreeMap::new();
                accumulate(&mut col, bar_index(m, &[b, c]), 1);
                if ab != 0 {
                    accumulate(&mut col, bar_index(m, &[ab, c]), -1);
                }
                let bc = g.mul(b, c);
                if bc != 0 {
                    accumulate(&mut col, bar_index(m, &[a, bc]), 1);
                }
                accumulate(&mut col, bar_index(m, &[a, b]), -1);
                cols3.push(finish(col));
            }
        }
    }
    let d3 = IntMat::from_cols(k * k, cols3);

    ChainComplex::new(sizes, vec![d1, d2, d3])
}

/// The chain map `C_n(Γ) → C_n(G)` induced by f: tuples are mapped
/// entrywise, and tuples acquiring an identity entry are sent to 0.
pub fn chain_map(f: &Hom, n: usize) -> IntMat {
    let ms = f.source().order();
    let mt = f.target().order();
    let rows = bar_rank(mt, n);
    if n == 0 {
        return IntMat::identity(1);
    }
    if ms == 1 {
        return IntMat::zeros(rows, 0);
    }
    let mut cols = Vec::with_capacity(bar_rank(ms, n));
    let mut tuple = vec![1u32; n];
    loop {
        let image: Vec<u32> = tuple.iter().map(|&x| f.apply(x)).collect();
        if image.iter().any(|&x| x == 0) {
            cols.push(Vec::new());
        } else {
            cols.push(vec![(bar_index(mt, &image) as u32, Int::ONE)]);
        }
        // advance tuple lexicographically (last coordinate fastest)
        let mut i = n;
        loop {
            if i == 0 {
                let d = IntMat::from_cols(rows, cols);
                return d;
            }
            i -= 1;
            tuple[i] += 1;
            if (tuple[i] as usize) < ms {
                break;
            }
            tuple[i] = 1;
        }
    }
}

/// Mapping cone of `C_*(f)`: degree n is `C_n(G) ⊕ C_{n−1}(Γ)` with
/// `d(x, y) = (dx − F(y), −dy)` (see the module convention note).
pub fn relative_complex(f: &Hom, cfg: &Config) -> Result<ChainComplex> {
    let cg = bar_complex(f.target(), cfg)?;
    let cgam = bar_complex(f.source(), cfg)?;
    let rg = |n: usize| cg.rank(n);
    let rgam = |n: i64| if n < 0 { 0 } else { cgam.rank(n as usize) };

    let sizes = [
        rg(0),
        rg(1) + rgam(0),
        rg(2) + rgam(1),
        rg(3) + rgam(2),
    ];
    let mut boundaries = Vec::new();
    for n in 1..=3usize {
        let rows = rg(n - 1) + rgam(n as i64 - 2);
        let mut cols: Vec<SparseVec> = Vec::with_capacity(sizes[n]);
        // G-part columns: (dx, 0)
        for j in 0..rg(n) {
            cols.push(cg.boundary(n).col(j).clone());
        }
        // Γ-part columns: (−F(y), −dy)
        let fmap = chain_map(f, n - 1);
        let row_off = rg(n - 1) as u32;
        for j in 0..rgam(n as i64 - 1) as usize {
            let mut col: SparseVec =
                fmap.col(j).iter().map(|(i, v)| (*i, v.neg())).collect();
            if n >= 2 {
                for (i, v) in cgam.boundary(n - 1).col(j) {
                    col.push((row_off + i, v.neg()));
                }
            }
            cols.push(col);
        }
        boundaries.push(IntMat::from_cols(rows, cols));
    }
    ChainComplex::new(sizes, boundaries)
}

/// Homology of a complex in invariant-factor form, with cycle
/// representatives and a projection from cycles to coordinates.
pub struct HomologyResult {
    pub group: AbGroup,
    /// one representative cycle per invariant factor
    pub cycle_reps: Vec<SparseVec>,
    /// torsion rows of the coordinate map (applies to any chain)
    proj: IntMat,
}

impl HomologyResult {
    fn trivial(rank: usize) -> HomologyResult {
        HomologyResult {
            group: AbGroup::trivial(),
            cycle_reps: Vec::new(),
            proj: IntMat::zeros(0, rank),
        }
    }

    /// Coordinates of a cycle in the homology group.
    pub fn project(&self, cycle: &SparseVec) -> AbElt {
        let v = self.proj.mul_vec(cycle);
        let mut dense = vec![Int::ZERO; self.group.rank()];
        for (i, x) in v {
            dense[i as usize] = x;
        }
        self.group.elt_from_ints(&dense)
    }

    /// Value of the coordinate functional on a single basis chain;
    /// extends `project` from cycles to all chains (used to read off
    /// explicit universal cocycles).
    pub fn functional(&self, basis_index: usize) -> AbElt {
        self.project(&vec![(basis_index as u32, Int::ONE)])
    }
}

/// Rows `from..` of a matrix, reindexed from zero.
fn tail_rows(m: &IntMat, from: usize) -> IntMat {
    let mut cols: Vec<SparseVec> = vec![Vec::new(); m.cols()];
    for (i, j, v) in m.entries() {
        if i >= from {
            cols[j].push(((i - from) as u32, v.clone()));
        }
    }
    IntMat::from_cols(m.rows() - from, cols)
}

/// `ker d_n / im d_{n+1}` with deterministic SNF-derived
/// representatives. The homology must be finite (always the case in
/// degrees 1, 2 for finite groups and cones of their maps).
pub fn homology(c: &ChainComplex, n: usize) -> Result<HomologyResult> {
    assert!(n == 1 || n == 2);
    let cn = c.rank(n);
    if cn == 0 {
        return Ok(HomologyResult::trivial(0));
    }
    let dn = c.boundary(n);
    let dn1 = c.boundary(n + 1);
    let full = snf_full(dn, SnfOptions { want_v: true, want_vinv: true, ..Default::default() });
    let r = full.rank;
    let knum = cn - r;
    if knum == 0 {
        return Ok(HomologyResult::trivial(cn));
    }
    let v = full.v.unwrap();
    let vinv = full.vinv.unwrap();
    // kernel basis: trailing columns of V; kernel coordinates of a
    // cycle: trailing rows of V⁻¹
    let kmat = IntMat::from_cols(cn, (r..cn).map(|j| v.col(j).clone()).collect());
    let kcoord = tail_rows(&vinv, r);

    // image of d_{n+1} expressed in kernel coordinates, as a lattice
    let mut hnf = LatticeHnf::new(knum);
    for j in 0..dn1.cols() {
        let col = dn1.col(j);
        if col.is_empty() {
            continue;
        }
        let kc = kcoord.mul_vec(col);
        if !kc.is_empty() {
            hnf.add_column(kc);
        }
    }
    hnf.normalize();
    if hnf.rank() != knum {
        return Err(Error::Internal("homology has a free part".into()));
    }
    let lsnf = snf_of_lattice(&hnf);
    let torsion: Vec<usize> = (0..knum).filter(|&i| !lsnf.divisors[i].is_one()).collect();
    let factors: Vec<u64> = torsion
        .iter()
        .map(|&i| lsnf.divisors[i].to_i64().expect("finite homology factor") as u64)
        .collect();
    let group = AbGroup::from_moduli(&factors);
    debug_assert_eq!(group.invariant_factors(), &factors[..]);

    // representatives: kernel-basis combinations of U⁻¹ columns
    let cycle_reps: Vec<SparseVec> =
        torsion.iter().map(|&i| kmat.mul_vec(lsnf.uinv.col(i))).collect();

    // projection: torsion rows of U composed with kernel coordinates
    let ut = lsnf.u.transpose();
    let kcoord_t = kcoord.transpose();
    let proj_cols: Vec<SparseVec> =
        torsion.iter().map(|&i| kcoord_t.mul_vec(ut.col(i))).collect();
    let proj = IntMat::from_cols(cn, proj_cols).transpose();

    Ok(HomologyResult { group, cycle_reps, proj })
}

/// A-valued n-cochain: one value per basis chain.
pub type Cochain = Vec<AbElt>;

pub struct CohomologyResult {
    pub group: AbGroup,
    /// one representative cocycle per invariant factor
    pub reps: Vec<Cochain>,
}

/// Evaluate a cochain on a chain (coefficients reduced through the
/// exponent of A).
pub fn evaluate_cochain(a: &AbGroup, cochain: &[AbElt], chain: &SparseVec) -> AbElt {
    let exponent = a.invariant_factors().last().copied().unwrap_or(1);
    chain.iter().fold(a.zero(), |acc, (i, coeff)| {
        let c = coeff
            .div_rem_euclid(&Int::from(exponent))
            .1
            .to_i64()
            .expect("reduced coefficient");
        a.add(&acc, &a.scale(c, &cochain[*i as usize]))
    })
}

/// `H²(C; A)` for finite abelian A, with explicit cocycle
/// representatives.
pub fn cohomology(c: &ChainComplex, a: &AbGroup) -> Result<CohomologyResult> {
    let cn = c.rank(2);
    if a.is_trivial() || cn == 0 {
        return Ok(CohomologyResult { group: AbGroup::trivial(), reps: Vec::new() });
    }
    let d2 = c.boundary(2);
    let d3 = c.boundary(3);
    let full = snf_full(d2, SnfOptions { want_vinv: true, ..Default::default() });
    let r = full.rank;
    let knum = cn - r;
    let sigma: Vec<u64> = (0..r)
        .map(|i| full.s.get(i, i).to_i64().expect("finite divisor") as u64)
        .collect();
    let vinv = full.vinv.unwrap();
    let kcoord = tail_rows(&vinv, r);

    let mut lattice_divisors: Vec<u64> = Vec::new();
    let mut lattice_u_t = IntMat::zeros(0, 0);
    if knum > 0 {
        let mut hnf = LatticeHnf::new(knum);
        for j in 0..d3.cols() {
            let col = d3.col(j);
            if col.is_empty() {
                continue;
            }
            let kc = kcoord.mul_vec(col);
            if !kc.is_empty() {
                hnf.add_column(kc);
            }
        }
        hnf.normalize();
        if hnf.rank() != knum {
            return Err(Error::Internal("second homology has a free part".into()));
        }
        let lsnf = snf_of_lattice(&hnf);
        lattice_divisors = lsnf
            .divisors
            .iter()
            .map(|d| d.to_i64().expect("finite divisor") as u64)
            .collect();
        lattice_u_t = lsnf.u.transpose();
    }

    let vinv_t = vinv.transpose();
    let kcoord_t = kcoord.transpose();
    let exponent = a.invariant_factors().last().copied().unwrap();

    // Each cyclic coefficient factor Z/am contributes:
    //  - for every divisor σⱼ of d₂ an Ext-type class of order
    //    gcd(σⱼ, am), represented by the j-th dual-basis functional;
    //  - for every lattice divisor sᵢ of the d₃ image a Hom-type class
    //    of order gcd(sᵢ, am), represented by (am/g)·(i-th kernel
    //    coordinate functional).
    let mut pieces: Vec<(u64, Cochain)> = Vec::new();
    let coord_cochain = |functional: &SparseVec, scale: i64, m: usize| -> Cochain {
        let mut dense = vec![Int::ZERO; cn];
        for (i, x) in functional {
            dense[*i as usize] = x.clone();
        }
        (0..cn)
            .map(|i| {
                let red = dense[i]
                    .div_rem_euclid(&Int::from(exponent))
                    .1
                    .to_i64()
                    .expect("reduced");
                let mut coords = vec![0i64; a.rank()];
                coords[m] = red * scale;
                a.elt(&coords)
            })
            .collect()
    };
    for (m, &am) in a.invariant_factors().iter().enumerate() {
        for (j, &s) in sigma.iter().enumerate() {
            let g = gcd(s, am);
            if g > 1 {
                pieces.push((g, coord_cochain(vinv_t.col(j), 1, m)));
            }
        }
        for (i, &s) in lattice_divisors.iter().enumerate() {
            let g = gcd(s, am);
            if g > 1 {
                let row = kcoord_t.mul_vec(lattice_u_t.col(i));
                pieces.push((g, coord_cochain(&row, (am / g) as i64, m)));
            }
        }
    }
    let (group, reps) = assemble_cyclic_pieces(a, cn, pieces);
    Ok(CohomologyResult { group, reps })
}

/// Combine independent cyclic summands (order, generator cochain) into
/// invariant-factor form, producing one representative per factor by
/// the standard primary reassembly.
fn assemble_cyclic_pieces(
    a: &AbGroup,
    len: usize,
    pieces: Vec<(u64, Cochain)>,
) -> (AbGroup, Vec<Cochain>) {
    let orders: Vec<u64> = pieces.iter().map(|&(g, _)| g).collect();
    let group = AbGroup::from_moduli(&orders);
    let depth = group.rank();
    if depth == 0 {
        return (group, Vec::new());
    }
    // prime → (exponent, piece index), largest exponents first
    let mut primes: BTreeMap<u64, Vec<(u32, usize)>> = BTreeMap::new();
    for (idx, &(g, _)) in pieces.iter().enumerate() {
        let mut g = g;
        let mut p = 2u64;
        while p * p <= g {
            if g % p == 0 {
                let mut e = 0;
                while g % p == 0 {
                    g /= p;
                    e += 1;
                }
                primes.entry(p).or_default().push((e, idx));
            }
            p += 1;
        }
        if g > 1 {
            primes.entry(g).or_default().push((1, idx));
        }
    }
    for l in primes.values_mut() {
        l.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    }
    let zero_rep = vec![a.zero(); len];
    let mut reps = vec![zero_rep; depth];
    for (&p, list) in &primes {
        for (slot, &(e, idx)) in list.iter().enumerate() {
            // slot 0 is the largest factor = last in ascending order
            let target = depth - 1 - slot;
            let (g, ref cochain) = pieces[idx];
            let scale = (g / p.pow(e)) as i64;
            for i in 0..len {
                reps[target][i] = a.add(&reps[target][i], &a.scale(scale, &cochain[i]));
            }
        }
    }
    (group, reps)
}

/// Universal-coefficients exactness report for
/// `0 → Ext(H₁, A) → H² → Hom(H₂, A) → 0`.
pub struct UctReport {
    pub ext: AbGroup,
    pub hom: AbGroup,
    pub h2: AbGroup,
    pub eval_image_order: u128,
    pub eval_kernel_order: u128,
    pub exact: bool,
}

pub fn universal_coefficients(c: &ChainComplex, a: &AbGroup) -> Result<UctReport> {
    let h1 = homology(c, 1)?;
    let h2h = homology(c, 2)?;
    let coh = cohomology(c, a)?;

    let pair_gcds = |g: &AbGroup| -> Vec<u64> {
        g.invariant_factors()
            .iter()
            .flat_map(|&d| a.invariant_factors().iter().map(move |&am| gcd(d, am)))
            .filter(|&g| g > 1)
            .collect()
    };
    let ext = AbGroup::from_moduli(&pair_gcds(&h1.group));
    let hom = AbGroup::from_moduli(&pair_gcds(&h2h.group));

    // evaluation map H² → Hom(H₂, A): pair each representative with the
    // cycle representatives, then measure the generated subgroup
    let gens: Vec<Vec<AbElt>> = coh
        .reps
        .iter()
        .map(|rep| h2h.cycle_reps.iter().map(|z| evaluate_cochain(a, rep, z)).collect())
        .collect();
    let mut seen: std::collections::BTreeSet<Vec<AbElt>> = Default::default();
    let zero: Vec<AbElt> = vec![a.zero(); h2h.cycle_reps.len()];
    seen.insert(zero);
    let mut frontier: Vec<Vec<AbElt>> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<AbElt> =
                x.iter().zip(g).map(|(u, v)| a.add(u, v)).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let eval_image_order = seen.len() as u128;
    let h2_order = coh.group.order();
    let eval_kernel_order = h2_order / eval_image_order;
    let exact = eval_image_order == hom.order()
        && eval_kernel_order == ext.order()
        && h2_order == ext.order() * hom.order();
    Ok(UctReport { ext, hom, h2: coh.group, eval_image_order, eval_kernel_order, exact })
}

/// The induced map `H₂(Γ) → H₂(G)`.
pub fn induced_h2(f: &Hom, cfg: &Config) -> Result<AbMap> {
    let cgam = bar_complex(f.source(), cfg)?;
    let cg = bar_complex(f.target(), cfg)?;
    let hgam = homology(&cgam, 2)?;
    let hg = homology(&cg, 2)?;
    let fmap = chain_map(f, 2);
    let mut matrix = vec![vec![0i64; hgam.group.rank()]; hg.group.rank()];
    for (j, z) in hgam.cycle_reps.iter().enumerate() {
        let image = fmap.mul_vec(z);
        let coords = hg.project(&image);
        for (i, &r) in coords.residues().iter().enumerate() {
            matrix[i][j] = r as i64;
        }
    }
    AbMap::new(hgam.group.clone(), hg.group.clone(), matrix)
}


#[cfg(test)]
mod bench_tests {
    use super::*;
    use crate::grp::alternating_group;

    #[test]
    #[ignore]
    fn a5_h2_scale() {
        let cfg = Config::slow(128);
        let g = alternating_group(5, &cfg).unwrap();
        let t = std::time::Instant::now();
        let c = bar_complex(&g, &cfg).unwrap();
        eprintln!("bar complex built in {:?}", t.elapsed());
        let t = std::time::Instant::now();
        let h2 = homology(&c, 2).unwrap();
        eprintln!("H2 in {:?}: {:?}", t.elapsed(), h2.group.invariant_factors());
        assert_eq!(h2.group.invariant_factors(), &[2]);
    }
}

#[cfg(test)]
mod bench_tests_s5 {
    use super::*;
    use crate::grp::symmetric_group;

    #[test]
    #[ignore]
    fn s5_h2_scale() {
        let cfg = Config::slow(128);
        let g = symmetric_group(5, &cfg).unwrap();
        let t = std::time::Instant::now();
        let c = bar_complex(&g, &cfg).unwrap();
        eprintln!("bar complex built in {:?}", t.elapsed());
        let t = std::time::Instant::now();
        let h2 = homology(&c, 2).unwrap();
        eprintln!("H2 in {:?}: {:?}", t.elapsed(), h2.group.invariant_factors());
        assert_eq!(h2.group.invariant_factors(), &[2]);
    }
}
