//! Central f-extensions: the cocycle ↔ group dictionary, equivalence,
//! Baer sums, pullbacks, pushouts and class enumeration.
//!
//! All cocycle handling uses the cone convention recorded in `bar`:
//! a pair (c, w) is a relative cocycle iff δc = 0 and f*c = δw, and a
//! relative coboundary iff it equals (δu, u∘f) for a normalized
//! 1-cochain u on G.

use std::collections::{BTreeMap, BTreeSet};

use crate::abgrp::{AbElt, AbGroup, AbMap};
use crate::grp::{
    direct_product, generated_subgroup, group_from_table, kernel, quotient, subgroup_as_group,
    Group, Hom, Subgroup,
};
use crate::zmat::{enumerate_null_space_mod, solve_mixed_congruences, Int, IntMat, LatticeHnf};
use crate::{Config, Error, Result};

/// Relative 2-cocycle: a normalized 2-cochain c on G and a 1-cochain w
/// on Γ with δc = 0 and δw = f*c.
#[derive(Clone, Debug)]
pub struct RelCocycle2 {
    pub f: Hom,
    pub a: AbGroup,
    /// c(g, h) at index g·|G| + h
    pub c: Vec<AbElt>,
    /// w(γ) at index γ
    pub w: Vec<AbElt>,
}

impl RelCocycle2 {
    pub fn new(f: Hom, a: AbGroup, c: Vec<AbElt>, w: Vec<AbElt>) -> Result<RelCocycle2> {
        let z = RelCocycle2 { f, a, c, w };
        z.validate()?;
        Ok(z)
    }

    pub fn c_at(&self, g: u32, h: u32) -> &AbElt {
        &self.c[g as usize * self.f.target().order() + h as usize]
    }

    pub fn w_at(&self, gamma: u32) -> &AbElt {
        &self.w[gamma as usize]
    }

    fn validate(&self) -> Result<()> {
        let g = self.f.target();
        let gam = self.f.source();
        let n = g.order();
        if self.c.len() != n * n || self.w.len() != gam.order() {
            return Err(Error::Invalid("cocycle table has wrong size".into()));
        }
        if self.c.iter().chain(self.w.iter()).any(|e| !self.a.contains(e)) {
            return Err(Error::Invalid("cocycle value outside the kernel group".into()));
        }
        for x in 0..n as u32 {
            if !self.c_at(0, x).is_zero() || !self.c_at(x, 0).is_zero() {
                return Err(Error::Invalid("cocycle is not normalized".into()));
            }
        }
        if !self.w[0].is_zero() {
            return Err(Error::Invalid("w is not normalized".into()));
        }
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                for z in g.elements() {
                    // c(x,y) + c(xy,z) = c(y,z) + c(x,yz)
                    let lhs = self.a.add(self.c_at(x, y), self.c_at(xy, z));
                    let rhs = self.a.add(self.c_at(y, z), self.c_at(x, g.mul(y, z)));
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "cocycle law fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        for p in gam.elements() {
            for q in gam.elements() {
                // w(q) − w(pq) + w(p) = c(fp, fq)
                let dw = self.a.add(
                    &self.a.sub(self.w_at(q), self.w_at(gam.mul(p, q))),
                    self.w_at(p),
                );
                if dw != *self.c_at(self.f.apply(p), self.f.apply(q)) {
                    return Err(Error::Invalid(format!(
                        "relative cocycle condition fails at ({p}, {q})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Componentwise sum with the same f and A.
    pub fn add(&self, other: &RelCocycle2) -> RelCocycle2 {
        assert_eq!(self.f, other.f);
        assert_eq!(self.a, other.a);
        RelCocycle2 {
            f: self.f.clone(),
            a: self.a.clone(),
            c: self.c.iter().zip(&other.c).map(|(x, y)| self.a.add(x, y)).collect(),
            w: self.w.iter().zip(&other.w).map(|(x, y)| self.a.add(x, y)).collect(),
        }
    }

    pub fn neg(&self) -> RelCocycle2 {
        RelCocycle2 {
            f: self.f.clone(),
            a: self.a.clone(),
            c: self.c.iter().map(|x| self.a.neg(x)).collect(),
            w: self.w.iter().map(|x| self.a.neg(x)).collect(),
        }
    }

    /// The zero cocycle for (f, A).
    pub fn zero(f: &Hom, a: &AbGroup) -> RelCocycle2 {
        let n = f.target().order();
        RelCocycle2 {
            f: f.clone(),
            a: a.clone(),
            c: vec![a.zero(); n * n],
            w: vec![a.zero(); f.source().order()],
        }
    }
}

/// Central f-extension: A ↪ E ↠ G with a structure map ψ: Γ → E
/// factorizing f.
#[derive(Clone, Debug)]
pub struct FExtension {
    pub f: Hom,
    pub a: AbGroup,
    pub e: Group,
    /// image of each A element (lexicographic index) in E
    pub iota: Vec<u32>,
    pub pi: Hom,
    pub psi: Hom,
}

impl FExtension {
    pub fn new(
        f: Hom,
        a: AbGroup,
        e: Group,
        iota: Vec<u32>,
        pi: Hom,
        psi: Hom,
    ) -> Result<FExtension> {
        let x = FExtension { f, a, e, iota, pi, psi };
        x.validate()?;
        Ok(x)
    }

    fn validate(&self) -> Result<()> {
        if self.pi.source() != &self.e
            || self.pi.target() != self.f.target()
            || self.psi.source() != self.f.source()
            || self.psi.target() != &self.e
        {
            return Err(Error::Invalid("extension maps have wrong endpoints".into()));
        }
        if self.iota.len() as u128 != self.a.order() {
            return Err(Error::Invalid("kernel embedding table has wrong size".into()));
        }
        // iota is an injective homomorphism
        let distinct: BTreeSet<u32> = self.iota.iter().copied().collect();
        if distinct.len() != self.iota.len() {
            return Err(Error::Invalid("kernel embedding is not injective".into()));
        }
        for (i, x) in self.a.elements().enumerate() {
            for (j, y) in self.a.elements().enumerate() {
                let sum = self.a.add(&x, &y);
                let k = self.a.index_of(&sum) as usize;
                if self.e.mul(self.iota[i], self.iota[j]) != self.iota[k] {
                    return Err(Error::Invalid("kernel embedding is not a homomorphism".into()));
                }
            }
        }
        // centrality
        for &m in &self.iota {
            if self.e.elements().any(|x| self.e.mul(m, x) != self.e.mul(x, m)) {
                return Err(Error::Invalid("kernel is not central".into()));
            }
        }
        // exactness
        if !self.pi.is_surjective() {
            return Err(Error::Invalid("projection is not surjective".into()));
        }
        let mut im: Vec<u32> = self.iota.clone();
        im.sort_unstable();
        if kernel(&self.pi).members() != im {
            return Err(Error::Invalid("kernel of projection differs from the embedded kernel".into()));
        }
        // π ∘ ψ = f
        for gamma in self.f.source().elements() {
            if self.pi.apply(self.psi.apply(gamma)) != self.f.apply(gamma) {
                return Err(Error::Invalid("structure map does not factorize f".into()));
            }
        }
        Ok(())
    }

    /// Preimage of an embedded kernel element.
    fn iota_inv(&self) -> BTreeMap<u32, AbElt> {
        self.a
            .elements()
            .enumerate()
            .map(|(i, x)| (self.iota[i], x))
            .collect()
    }
}

/// Twisted product realization: E = A × G ordered by (G index,
/// A lexicographic), multiplication (a, g)(b, h) = (a + b + c(g, h), gh),
/// ι(a) = (a, e), π(a, g) = g, ψ(γ) = (−w(γ), fγ).
pub fn extension_from_cocycle(z: &RelCocycle2, cfg: &Config) -> Result<FExtension> {
    z.validate()?;
    let g = z.f.target();
    let gam = z.f.source();
    let a = &z.a;
    let na = a.order() as usize;
    let n = na * g.order();
    if n > cfg.order_cap {
        return Err(Error::SizeLimit { cap: cfg.order_cap, reached: n });
    }
    let idx = |av: &AbElt, gv: u32| gv as usize * na + a.index_of(av) as usize;
    let a_elems: Vec<AbElt> = a.elements().collect();
    let mut table = vec![vec![0u32; n]; n];
    for gv in g.elements() {
        for (ai, av) in a_elems.iter().enumerate() {
            let row = gv as usize * na + ai;
            for hv in g.elements() {
                for bv in &a_elems {
                    let sum = a.add(&a.add(av, bv), z.c_at(gv, hv));
                    table[row][idx(bv, hv)] = idx(&sum, g.mul(gv, hv)) as u32;
                }
            }
        }
    }
    let e = group_from_table(table, cfg)?;
    let iota: Vec<u32> = a_elems.iter().map(|av| idx(av, 0) as u32).collect();
    let pi_table: Vec<u32> = (0..n).map(|i| (i / na) as u32).collect();
    let pi = Hom::new(e.clone(), g.clone(), pi_table, cfg)?;
    let psi_table: Vec<u32> = gam
        .elements()
        .map(|gamma| idx(&a.neg(z.w_at(gamma)), z.f.apply(gamma)) as u32)
        .collect();
    let psi = Hom::new(gam.clone(), e.clone(), psi_table, cfg)?;
    FExtension::new(z.f.clone(), a.clone(), e, iota, pi, psi)
}

/// Read off a relative cocycle through the least-index section.
pub fn classify(x: &FExtension) -> RelCocycle2 {
    let g = x.f.target();
    let gam = x.f.source();
    let n = g.order();
    // least-index preimages; s(e) = e since the identity is element 0
    let mut section = vec![u32::MAX; n];
    for m in x.e.elements() {
        let t = x.pi.apply(m) as usize;
        if section[t] == u32::MAX {
            section[t] = m;
        }
    }
    let inv = x.iota_inv();
    let mut c = Vec::with_capacity(n * n);
    for gv in g.elements() {
        for hv in g.elements() {
            let m = x.e.mul(
                x.e.mul(section[gv as usize], section[hv as usize]),
                x.e.inv(section[g.mul(gv, hv) as usize]),
            );
            c.push(inv[&m].clone());
        }
    }
    let w: Vec<AbElt> = gam
        .elements()
        .map(|gamma| {
            let m =
                x.e.mul(x.psi.apply(gamma), x.e.inv(section[x.f.apply(gamma) as usize]));
            x.a.neg(&inv[&m])
        })
        .collect();
    RelCocycle2 { f: x.f.clone(), a: x.a.clone(), c, w }
}

/// Decide whether a cocycle pair is a relative coboundary (δu, u∘f),
/// one congruence solve per invariant factor of A.
pub fn is_coboundary(z: &RelCocycle2) -> bool {
    let g = z.f.target();
    let gam = z.f.source();
    let n = g.order();
    let k = n - 1; // unknowns u(g), g ≠ e
    let col_of = |x: u32| (x - 1) as usize;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs_idx: Vec<(bool, u32, u32)> = Vec::new(); // (is_c, i, j)
    for gv in 1..n as u32 {
        for hv in 1..n as u32 {
            // u(h) − u(gh) + u(g) = c(g,h)
            let mut row = vec![0i64; k];
            row[col_of(hv)] += 1;
            let gh = g.mul(gv, hv);
            if gh != 0 {
                row[col_of(gh)] -= 1;
            }
            row[col_of(gv)] += 1;
            rows.push(row);
            rhs_idx.push((true, gv, hv));
        }
    }
    for gamma in 1..gam.order() as u32 {
        // u(fγ) = w(γ)
        let mut row = vec![0i64; k];
        let fg = z.f.apply(gamma);
        if fg != 0 {
            row[col_of(fg)] += 1;
        }
        rows.push(row);
        rhs_idx.push((false, gamma, 0));
    }
    let m = IntMat::from_dense(&rows);
    for (fi, &am) in z.a.invariant_factors().iter().enumerate() {
        let moduli = vec![am; rows.len()];
        let b: Vec<Int> = rhs_idx
            .iter()
            .map(|&(is_c, i, j)| {
                let v = if is_c { z.c_at(i, j) } else { z.w_at(i) };
                Int::from(v.residues()[fi])
            })
            .collect();
        if solve_mixed_congruences(&m, &moduli, &b).is_none() {
            return false;
        }
    }
    true
}

/// Equivalence of f-extensions with the same f and A (identity on G
/// and A), decided by the coboundary criterion.
pub fn is_equivalent(x: &FExtension, y: &FExtension) -> bool {
    assert_eq!(x.f, y.f, "extensions of different homomorphisms");
    assert_eq!(x.a, y.a, "extensions with different kernels");
    let diff = classify(x).add(&classify(y).neg());
    is_coboundary(&diff)
}

/// Baer sum at the cocycle level.
pub fn baer_sum(x: &FExtension, y: &FExtension, cfg: &Config) -> Result<FExtension> {
    let z = classify(x).add(&classify(y));
    extension_from_cocycle(&z, cfg)
}

/// Inverse class: pushout along a ↦ −a.
pub fn negate(x: &FExtension, cfg: &Config) -> Result<FExtension> {
    extension_from_cocycle(&classify(x).neg(), cfg)
}

/// The group-level Baer sum oracle: literal pullback over G followed by
/// pushout along the antidiagonal copy of A. Only for cross-checks on
/// small orders.
pub fn baer_sum_group(x: &FExtension, y: &FExtension, cfg: &Config) -> Result<FExtension> {
    const ORACLE_CAP: usize = 64;
    assert_eq!(x.f, y.f);
    assert_eq!(x.a, y.a);
    if x.e.order() > ORACLE_CAP || y.e.order() > ORACLE_CAP {
        return Err(Error::Budget(format!(
            "group-level Baer sum oracle is limited to orders ≤ {ORACLE_CAP}"
        )));
    }
    let d = direct_product(&x.e, &y.e);
    let nb = y.e.order() as u32;
    let pair = |m: u32, mp: u32| m * nb + mp;
    // PB = {(m, m') : π(m) = π'(m')}
    let members: Vec<u32> = d
        .elements()
        .filter(|&z| x.pi.apply(z / nb) == y.pi.apply(z % nb))
        .collect();
    let pb = Subgroup::from_members_unchecked(&d, members);
    let (pbg, incl) = subgroup_as_group(&pb);
    // N = {(ι(a), ι'(−a))}
    let nmembers: Vec<u32> = x
        .a
        .elements()
        .map(|av| {
            let i = x.a.index_of(&av) as usize;
            let j = x.a.index_of(&x.a.neg(&av)) as usize;
            pair(x.iota[i], y.iota[j])
        })
        .collect();
    let in_pb: BTreeMap<u32, u32> = incl
        .image_table()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let nsub = Subgroup::from_members_unchecked(&pbg, {
        let mut v: Vec<u32> = nmembers.iter().map(|m| in_pb[m]).collect();
        v.sort_unstable();
        v
    });
    let (q, qproj) = quotient(&pbg, &nsub)?;
    let iota: Vec<u32> = x
        .a
        .elements()
        .map(|av| {
            let i = x.a.index_of(&av) as usize;
            qproj.apply(in_pb[&pair(x.iota[i], y.iota[0])])
        })
        .collect();
    // π'' via any PB representative
    let mut pi_table = vec![0u32; q.order()];
    for el in pbg.elements() {
        pi_table[qproj.apply(el) as usize] = x.pi.apply(incl.apply(el) / nb);
    }
    let pi = Hom::new(q.clone(), x.f.target().clone(), pi_table, cfg)?;
    let psi_table: Vec<u32> = x
        .f
        .source()
        .elements()
        .map(|gamma| qproj.apply(in_pb[&pair(x.psi.apply(gamma), y.psi.apply(gamma))]))
        .collect();
    let psi = Hom::new(x.f.source().clone(), q.clone(), psi_table, cfg)?;
    FExtension::new(x.f.clone(), x.a.clone(), q, iota, pi, psi)
}

/// Pullback of the underlying central extension of `x` along `h`
/// (the structure map of `x` is not used), with the brute-force list
/// of group-theoretic sections of the projection to the source of `h`.
pub struct Pullback {
    pub mprime: Group,
    pub to_e: Hom,
    pub to_source: Hom,
    /// sections s with to_source ∘ s = id, as maps into mprime
    pub sections: Vec<Hom>,
}

pub fn pullback_along(x: &FExtension, h: &Hom, cfg: &Config) -> Result<Pullback> {
    assert_eq!(h.target(), x.f.target(), "pullback along a map to a different group");
    let gam = h.source();
    if gam.order() > cfg.section_cap {
        return Err(Error::Budget(format!(
            "section search is limited to |Γ| ≤ {}",
            cfg.section_cap
        )));
    }
    let d = direct_product(&x.e, gam);
    let ng = gam.order() as u32;
    let members: Vec<u32> = d
        .elements()
        .filter(|&z| x.pi.apply(z / ng) == h.apply(z % ng))
        .collect();
    let sub = Subgroup::from_members_unchecked(&d, members);
    let (mprime, incl) = subgroup_as_group(&sub);
    let to_e_table: Vec<u32> = incl.image_table().iter().map(|&v| v / ng).collect();
    let to_source_table: Vec<u32> = incl.image_table().iter().map(|&v| v % ng).collect();
    let to_e = Hom::new(mprime.clone(), x.e.clone(), to_e_table, cfg)?;
    let to_source = Hom::new(mprime.clone(), gam.clone(), to_source_table, cfg)?;
    let sections = homs_with_constraint(gam, &mprime, &to_source, cfg)?;
    Ok(Pullback { mprime, to_e, to_source, sections })
}

/// All homomorphisms s: Γ → M with proj ∘ s = id, by generator-image
/// backtracking over the fibers of proj.
fn homs_with_constraint(
    gam: &Group,
    m: &Group,
    proj: &Hom,
    cfg: &Config,
) -> Result<Vec<Hom>> {
    let gens = generating_set(gam);
    let fibers: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| m.elements().filter(|&x| proj.apply(x) == g).collect())
        .collect();
    let mut out: Vec<Hom> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut pick = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<u32> = pick.iter().zip(&fibers).map(|(&i, f)| f[i]).collect();
        if let Ok(h) = crate::grp::hom_from_generator_images(gam, m, &gens, &images, cfg) {
            if seen.insert(h.image_table().to_vec()) {
                out.push(h);
            }
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                break 'outer;
            }
            pick[k] += 1;
            if pick[k] < fibers[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if pick.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Greedy generating set in element-index order.
pub fn generating_set(g: &Group) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut cur = generated_subgroup(g, &[]);
    for x in g.elements() {
        if !cur.contains(x) {
            gens.push(x);
            cur = generated_subgroup(g, &gens);
            if cur.order() == g.order() {
                break;
            }
        }
    }
    gens
}

/// Pushout along a map of kernels, at the cocycle level.
pub fn pushout_along(x: &FExtension, e: &AbMap, cfg: &Config) -> Result<FExtension> {
    assert_eq!(e.source(), &x.a, "pushout along a map from a different kernel");
    let z = classify(x);
    let z2 = RelCocycle2::new(
        x.f.clone(),
        e.target().clone(),
        z.c.iter().map(|v| e.apply(v)).collect(),
        z.w.iter().map(|v| e.apply(v)).collect(),
    )?;
    extension_from_cocycle(&z2, cfg)
}

/// All maps of f-extensions X → Y: homs τ with π_Y ∘ τ = π_X and
/// τ ∘ ψ_X = ψ_Y.
pub fn f_extension_maps(x: &FExtension, y: &FExtension, cfg: &Config) -> Result<Vec<Hom>> {
    assert_eq!(x.f, y.f, "maps between extensions of different homomorphisms");
    if x.e.order() > cfg.map_search_cap {
        return Err(Error::Budget(format!(
            "extension map search is limited to |E| ≤ {}",
            cfg.map_search_cap
        )));
    }
    let gens = generating_set(&x.e);
    let fibers: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| {
            let t = x.pi.apply(g);
            y.e.elements().filter(|&m| y.pi.apply(m) == t).collect()
        })
        .collect();
    let mut out: Vec<Hom> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut pick = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<u32> = pick.iter().zip(&fibers).map(|(&i, f)| f[i]).collect();
        if let Ok(t) = crate::grp::hom_from_generator_images(&x.e, &y.e, &gens, &images, cfg) {
            let compatible = x
                .f
                .source()
                .elements()
                .all(|gamma| t.apply(x.psi.apply(gamma)) == y.psi.apply(gamma))
                && x.e.elements().all(|m| y.pi.apply(t.apply(m)) == x.pi.apply(m));
            if compatible && seen.insert(t.image_table().to_vec()) {
                out.push(t);
            }
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                break 'outer;
            }
            pick[k] += 1;
            if pick[k] < fibers[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if pick.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// One representative per equivalence class of central f-extensions
/// with kernel A, by brute-force cocycle enumeration with canonical
/// coboundary reduction.
pub fn enumerate_classes(f: &Hom, a: &AbGroup, cfg: &Config) -> Result<Vec<FExtension>> {
    let g = f.target();
    let gam = f.source();
    if g.order() > cfg.class_g || gam.order() > cfg.class_gamma || a.order() > cfg.class_a as u128
    {
        return Err(Error::Budget(format!(
            "class enumeration budget is |G| ≤ {}, |Γ| ≤ {}, |A| ≤ {}",
            cfg.class_g, cfg.class_gamma, cfg.class_a
        )));
    }
    let n = g.order();
    let ngam = gam.order();
    let kc = (n - 1) * (n - 1);
    let kw = ngam - 1;
    let nvars = kc + kw;
    let c_var = |gv: u32, hv: u32| (gv as usize - 1) * (n - 1) + (hv as usize - 1);
    let w_var = |gamma: u32| kc + gamma as usize - 1;

    // cocycle law and relative condition as an integer matrix
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for x in 1..n as u32 {
        for y in 1..n as u32 {
            let xy = g.mul(x, y);
            for z in 1..n as u32 {
                let mut row = vec![0i64; nvars];
                row[c_var(x, y)] += 1;
                if xy != 0 {
                    row[c_var(xy, z)] += 1;
                }
                row[c_var(y, z)] -= 1;
                let yz = g.mul(y, z);
                if yz != 0 {
                    row[c_var(x, yz)] -= 1;
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    for p in 1..ngam as u32 {
        for q in 1..ngam as u32 {
            let mut row = vec![0i64; nvars];
            row[w_var(q)] += 1;
            let pq = gam.mul(p, q);
            if pq != 0 {
                row[w_var(pq)] -= 1;
            }
            row[w_var(p)] += 1;
            let (fp, fq) = (f.apply(p), f.apply(q));
            if fp != 0 && fq != 0 {
                row[c_var(fp, fq)] -= 1;
            }
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
    let m = if rows.is_empty() {
        IntMat::zeros(0, nvars)
    } else {
        IntMat::from_dense(&rows)
    };

    // coboundary generators δ(u) = (δu, u∘f) per unit cochain u = e_g
    let coboundary_cols: Vec<Vec<i64>> = (1..n as u32)
        .map(|gv| {
            let mut col = vec![0i64; nvars];
            for x in 1..n as u32 {
                for y in 1..n as u32 {
                    // δu(x,y) = u(y) − u(xy) + u(x)
                    let mut v = 0i64;
                    if y == gv {
                        v += 1;
                    }
                    if g.mul(x, y) == gv {
                        v -= 1;
                    }
                    if x == gv {
                        v += 1;
                    }
                    col[c_var(x, y)] += v;
                }
            }
            for gamma in 1..ngam as u32 {
                if f.apply(gamma) == gv {
                    col[w_var(gamma)] += 1;
                }
            }
            col
        })
        .collect();

    // per invariant factor: solutions mod a_m, reduced to canonical
    // coset representatives of the coboundary lattice
    let mut per_factor: Vec<Vec<Vec<u64>>> = Vec::new();
    for &am in a.invariant_factors() {
        let ns = enumerate_null_space_mod(&m, am);
        let mut lattice = LatticeHnf::new(nvars);
        for col in &coboundary_cols {
            let sv: Vec<(u32, Int)> = col
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i as u32, Int::from(v)))
                .collect();
            if !sv.is_empty() {
                lattice.add_column(sv);
            }
        }
        for i in 0..nvars {
            lattice.add_column(vec![(i as u32, Int::from(am))]);
        }
        lattice.normalize();
        let mut reps: BTreeMap<Vec<Int>, Vec<u64>> = BTreeMap::new();
        for sol in ns.iter() {
            let key =
                lattice.reduce_vector(sol.iter().map(|&v| Int::from(v)).collect());
            reps.entry(key).or_insert(sol);
        }
        per_factor.push(reps.into_values().collect());
    }

    // assemble class representatives across the factors
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for reps in &per_factor {
        combos = combos
            .iter()
            .flat_map(|c| {
                (0..reps.len()).map(move |i| {
                    let mut c2 = c.clone();
                    c2.push(i);
                    c2
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(combos.len());
    for combo in combos {
        let value = |var: usize| -> AbElt {
            let coords: Vec<i64> = combo
                .iter()
                .enumerate()
                .map(|(fi, &ri)| per_factor[fi][ri][var] as i64)
                .collect();
            a.elt(&coords)
        };
        let mut c = vec![a.zero(); n * n];
        for gv in 1..n as u32 {
            for hv in 1..n as u32 {
                c[gv as usize * n + hv as usize] = value(c_var(gv, hv));
            }
        }
        let mut w = vec![a.zero(); ngam];
        for gamma in 1..ngam as u32 {
            w[gamma as usize] = value(w_var(gamma));
        }
        let z = RelCocycle2::new(f.clone(), a.clone(), c, w)?;
        out.push(extension_from_cocycle(&z, cfg)?);
    }
    Ok(out)
}

impl Subgroup {
    /// Internal constructor for precomputed member sets that are known
    /// to be subgroups (pullback/pushout fibered products).
    pub(crate) fn from_members_unchecked(parent: &Group, members: Vec<u32>) -> Subgroup {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.binary_search(&0).is_ok());
        Subgroup::new_unchecked(parent.clone(), members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{cyclic_group, hom_from_generator_images, trivial_group};

    fn cfg() -> Config {
        Config::default()
    }

    /// f: Z/4 → Z/2 reduction.
    fn reduction_f() -> Hom {
        hom_from_generator_images(&cyclic_group(4), &cyclic_group(2), &[1], &[1], &cfg()).unwrap()
    }

    /// The nontrivial relative cocycle for f: Z/4 → Z/2, A = Z/2:
    /// c(1,1) = 1 with w solving δw = f*c.
    fn z4_cocycle() -> RelCocycle2 {
        let f = reduction_f();
        let a = AbGroup::cyclic(2);
        let mut c = vec![a.zero(); 4];
        c[3] = a.elt(&[1]); // c(1,1) = 1
        // δw(γ₁,γ₂) = c(fγ₁, fγ₂): w(1)=0, w(2)=1, w(3)=1 works
        let w = vec![a.zero(), a.zero(), a.elt(&[1]), a.elt(&[1])];
        RelCocycle2::new(f, a, c, w).unwrap()
    }

    #[test]
    fn split_extension_roundtrip() {
        let f = reduction_f();
        let a = AbGroup::cyclic(2);
        let z = RelCocycle2::zero(&f, &a);
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        assert_eq!(x.e.order(), 4);
        // split structure map: ψ(γ) = (0, fγ)
        assert_eq!(x.pi.apply(x.psi.apply(1)), x.f.apply(1));
        let back = classify(&x);
        assert!(is_coboundary(&back));
    }

    #[test]
    fn twisted_z4_is_cyclic() {
        let z = z4_cocycle();
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        assert_eq!(x.e.order(), 4);
        // E ≅ Z/4: it has an element of order 4
        assert!(x.e.elements().any(|m| x.e.element_order(m) == 4));
        // ψ is an isomorphism here
        assert!(x.psi.is_injective() && x.psi.is_surjective());
        // round trip stays in the same class
        let y = extension_from_cocycle(&classify(&x), &cfg()).unwrap();
        assert!(is_equivalent(&x, &y));
    }

    #[test]
    fn invalid_cocycles_rejected() {
        let f = reduction_f();
        let a = AbGroup::cyclic(2);
        // un-normalized c
        let mut c = vec![a.zero(); 4];
        c[0] = a.elt(&[1]);
        assert!(RelCocycle2::new(f.clone(), a.clone(), c, vec![a.zero(); 4]).is_err());
        // broken relative condition
        let c = vec![a.zero(); 4];
        let mut w = vec![a.zero(); 4];
        w[1] = a.elt(&[1]);
        assert!(RelCocycle2::new(f, a, c, w).is_err());
    }

    #[test]
    fn z4_vs_klein_not_equivalent() {
        // Γ = 1, G = Z/2, A = Z/2: the two classes are Z/4 and Z/2×Z/2
        let f = Hom::trivial(&trivial_group(), &cyclic_group(2));
        let a = AbGroup::cyclic(2);
        let split = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        let mut c = vec![a.zero(); 4];
        c[3] = a.elt(&[1]);
        let z = RelCocycle2::new(f, a, c, vec![AbGroup::cyclic(2).zero()]).unwrap();
        let twisted = extension_from_cocycle(&z, &cfg()).unwrap();
        assert!(!is_equivalent(&split, &twisted));
        assert!(is_equivalent(&split, &split));
    }

    #[test]
    fn distinct_structure_maps_inequivalent() {
        // Γ = Z/2, G = 1, A = Z/2: two distinct w give inequivalent
        // f-extensions on the same underlying split extension
        let gam = cyclic_group(2);
        let f = Hom::trivial(&gam, &trivial_group());
        let a = AbGroup::cyclic(2);
        let z0 = RelCocycle2::zero(&f, &a);
        let z1 = RelCocycle2::new(
            f.clone(),
            a.clone(),
            vec![a.zero()],
            vec![a.zero(), a.elt(&[1])],
        )
        .unwrap();
        let x0 = extension_from_cocycle(&z0, &cfg()).unwrap();
        let x1 = extension_from_cocycle(&z1, &cfg()).unwrap();
        assert!(!is_equivalent(&x0, &x1));
    }

    #[test]
    fn baer_sum_group_laws() {
        let z = z4_cocycle();
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        let neutral =
            extension_from_cocycle(&RelCocycle2::zero(&z.f, &z.a), &cfg()).unwrap();
        let s = baer_sum(&x, &neutral, &cfg()).unwrap();
        assert!(is_equivalent(&s, &x));
        let inv = negate(&x, &cfg()).unwrap();
        let zero = baer_sum(&x, &inv, &cfg()).unwrap();
        assert!(is_equivalent(&zero, &neutral));
        // the order-2 class group: x + x = 0
        let double = baer_sum(&x, &x, &cfg()).unwrap();
        assert!(is_equivalent(&double, &neutral));
    }

    #[test]
    fn group_level_baer_sum_agrees() {
        let z = z4_cocycle();
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        let neutral =
            extension_from_cocycle(&RelCocycle2::zero(&z.f, &z.a), &cfg()).unwrap();
        for (p, q) in [(&x, &x), (&x, &neutral), (&neutral, &neutral)] {
            let cocycle_level = baer_sum(p, q, &cfg()).unwrap();
            let group_level = baer_sum_group(p, q, &cfg()).unwrap();
            assert!(is_equivalent(&cocycle_level, &group_level));
        }
    }

    #[test]
    fn pullback_sections() {
        // E = Z/4 → Z/2 pulled back along id has no section
        let f = Hom::trivial(&trivial_group(), &cyclic_group(2));
        let a = AbGroup::cyclic(2);
        let mut c = vec![a.zero(); 4];
        c[3] = a.elt(&[1]);
        let z = RelCocycle2::new(f, a, c, vec![AbGroup::cyclic(2).zero()]).unwrap();
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        let idm = Hom::identity(&cyclic_group(2));
        let pb = pullback_along(&x, &idm, &cfg()).unwrap();
        assert!(pb.sections.is_empty());

        // an f-extension always yields ≥ 1 section along its own f
        let zrel = z4_cocycle();
        let xrel = extension_from_cocycle(&zrel, &cfg()).unwrap();
        let pb2 = pullback_along(&xrel, &zrel.f, &cfg()).unwrap();
        assert!(!pb2.sections.is_empty());
        // γ ↦ (ψγ, γ) is among them
        let expected: Vec<u32> = zrel
            .f
            .source()
            .elements()
            .map(|gamma| {
                let pair = xrel.psi.apply(gamma) * zrel.f.source().order() as u32 + gamma;
                pb2.to_e
                    .source()
                    .elements()
                    .find(|&mp| {
                        pb2.to_e.apply(mp) == xrel.psi.apply(gamma)
                            && pb2.to_source.apply(mp) == gamma
                    })
                    .unwrap_or(pair)
            })
            .collect();
        assert!(pb2.sections.iter().any(|s| s.image_table() == expected));

        // Γ = 1: exactly one section
        let pb3 =
            pullback_along(&x, &Hom::trivial(&trivial_group(), &cyclic_group(2)), &cfg())
                .unwrap();
        assert_eq!(pb3.sections.len(), 1);
    }

    #[test]
    fn pushout_examples() {
        let z = z4_cocycle();
        let x = extension_from_cocycle(&z, &cfg()).unwrap();
        let idm = AbMap::identity(&z.a);
        let same = pushout_along(&x, &idm, &cfg()).unwrap();
        assert!(is_equivalent(&x, &same));

        let zero_map = AbMap::zero(&z.a, &z.a);
        let neutral =
            extension_from_cocycle(&RelCocycle2::zero(&z.f, &z.a), &cfg()).unwrap();
        let split = pushout_along(&x, &zero_map, &cfg()).unwrap();
        assert!(is_equivalent(&split, &neutral));
    }

    #[test]
    fn extension_map_search() {
        let f = reduction_f();
        let a = AbGroup::cyclic(2);
        let split = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        let maps = f_extension_maps(&split, &split, &cfg()).unwrap();
        assert!(!maps.is_empty());
        // every returned map commutes with the projections
        for t in &maps {
            for m in split.e.elements() {
                assert_eq!(split.pi.apply(t.apply(m)), split.pi.apply(m));
            }
        }
        // no maps between the two inequivalent Γ=1 extensions
        let ft = Hom::trivial(&trivial_group(), &cyclic_group(2));
        let s2 = extension_from_cocycle(&RelCocycle2::zero(&ft, &a), &cfg()).unwrap();
        let mut c = vec![a.zero(); 4];
        c[3] = a.elt(&[1]);
        let tw = extension_from_cocycle(
            &RelCocycle2::new(ft, a.clone(), c, vec![a.zero()]).unwrap(),
            &cfg(),
        )
        .unwrap();
        assert!(f_extension_maps(&s2, &tw, &cfg()).unwrap().is_empty());
    }

    #[test]
    fn class_counts() {
        // f = id: exactly one class
        let z2 = cyclic_group(2);
        let a = AbGroup::cyclic(2);
        let classes = enumerate_classes(&Hom::identity(&z2), &a, &cfg()).unwrap();
        assert_eq!(classes.len(), 1);

        // G = 1, Γ = Z/2, A = Z/4: |Hom(Z/2, Z/4)| = 2 classes
        let f = Hom::trivial(&z2, &trivial_group());
        let classes = enumerate_classes(&f, &AbGroup::cyclic(4), &cfg()).unwrap();
        assert_eq!(classes.len(), 2);

        // f: Z/4 → Z/2, A = Z/2: 2 classes
        let classes = enumerate_classes(&reduction_f(), &a, &cfg()).unwrap();
        assert_eq!(classes.len(), 2);

        // representatives are pairwise inequivalent
        for (i, x) in classes.iter().enumerate() {
            for (j, y) in classes.iter().enumerate() {
                assert_eq!(is_equivalent(x, y), i == j);
            }
        }
    }

    #[test]
    fn budget_errors() {
        let big = cyclic_group(16);
        let f = Hom::identity(&big);
        assert!(matches!(
            enumerate_classes(&f, &AbGroup::cyclic(2), &cfg()),
            Err(Error::Budget(_))
        ));
    }
}
