//! Universal central f-extensions, the Hopf fast path, the
//! hypercentral tower, five-term exactness and lifting obstructions.

use std::collections::BTreeMap;

use crate::abgrp::{AbElt, AbGroup, AbMap};
use crate::bar::{bar_index, bar_rank, chain_map, homology, relative_complex, HomologyResult};
use crate::ext::{
    classify, extension_from_cocycle, f_extension_maps, is_coboundary, pullback_along,
    FExtension, RelCocycle2,
};
use crate::grp::{
    abelianization, commutator_subgroup, is_ab_surjective, kernel, normal_subgroups, quotient,
    subgroup_as_group, whole_subgroup, Hom, Subgroup,
};
use crate::zmat::{Int, IntMat, SparseVec};
use crate::{Config, Error, Result};

/// Hopf realization for surjective f: H₂(G,Γ) = K/[K,Γ] embedded in
/// U = Γ/[K,Γ], with the natural quotient as the structure map.
pub fn hopf_surjective(f: &Hom, cfg: &Config) -> Result<(AbGroup, Hom, FExtension)> {
    if !f.is_surjective() {
        return Err(Error::Hypothesis("the Hopf formula requires a surjective map".into()));
    }
    let gam = f.source();
    let k = kernel(f);
    let kcomm = commutator_subgroup(gam, &k, &whole_subgroup(gam));
    let (u, eta) = quotient(gam, &kcomm)?;
    // π: U → G through coset representatives
    let mut pi_table = vec![0u32; u.order()];
    for x in gam.elements() {
        pi_table[eta.apply(x) as usize] = f.apply(x);
    }
    let pi = Hom::new(u.clone(), f.target().clone(), pi_table, cfg)?;
    // kernel of π is K/[K,Γ], abelian; read off its invariant factors
    let ker_sub = kernel(&pi);
    let (kgroup, incl) = subgroup_as_group(&ker_sub);
    let (a, coords) = abelianization(&kgroup);
    let mut by_coords: BTreeMap<AbElt, u32> = BTreeMap::new();
    for (i, c) in coords.iter().enumerate() {
        by_coords.insert(c.clone(), i as u32);
    }
    let iota: Vec<u32> = a
        .elements()
        .map(|av| incl.apply(by_coords[&av]))
        .collect();
    let x = FExtension::new(f.clone(), a.clone(), u, iota, pi, eta.clone())?;
    Ok((a, eta, x))
}

/// Explicit universal cocycle from the homology coordinate
/// functionals: the pair (c, w) with values in H₂(G,Γ) whose pairing
/// with the i-th cycle representative is the i-th generator, i.e. the
/// identity under the Hom(H₂, ·) correspondence.
pub fn universal_cocycle(f: &Hom, cfg: &Config) -> Result<RelCocycle2> {
    let rc = relative_complex(f, cfg)?;
    let h2 = homology(&rc, 2)?;
    cocycle_from_functionals(f, &h2)
}

fn cocycle_from_functionals(f: &Hom, h2: &HomologyResult) -> Result<RelCocycle2> {
    let g = f.target();
    let gam = f.source();
    let n = g.order();
    let kg2 = bar_rank(n, 2);
    let a = h2.group.clone();
    let mut c = vec![a.zero(); n * n];
    for gv in 1..n as u32 {
        for hv in 1..n as u32 {
            c[gv as usize * n + hv as usize] = h2.functional(bar_index(n, &[gv, hv]));
        }
    }
    // Γ-part basis chains carry −w under the cone dictionary
    let mut w = vec![a.zero(); gam.order()];
    for gamma in 1..gam.order() as u32 {
        w[gamma as usize] = a.neg(&h2.functional(kg2 + gamma as usize - 1));
    }
    RelCocycle2::new(f.clone(), a, c, w)
}

/// The universal central f-extension (U, η) with kernel H₂(G,Γ).
///
/// Dispatch: the Hopf path for surjective f, the mapping-cone cocycle
/// path otherwise. With `verify` set, both paths run and the mutual
/// f-extension maps are checked to be unique and inverse.
pub fn universal_extension(f: &Hom, cfg: &Config, verify: bool) -> Result<FExtension> {
    if !is_ab_surjective(f) {
        return Err(Error::Hypothesis(
            "the universal extension requires surjectivity on abelianizations".into(),
        ));
    }
    let x = if f.is_surjective() {
        let (_, _, x) = hopf_surjective(f, cfg)?;
        if verify {
            let z = universal_cocycle(f, cfg)?;
            let y = extension_from_cocycle(&z, cfg)?;
            check_mutually_unique(&x, &y, cfg)?;
        }
        x
    } else {
        let z = universal_cocycle(f, cfg)?;
        extension_from_cocycle(&z, cfg)?
    };
    if !is_ab_surjective(&x.psi) {
        return Err(Error::Internal(
            "universal structure map is not surjective on abelianizations".into(),
        ));
    }
    Ok(x)
}

fn check_mutually_unique(x: &FExtension, y: &FExtension, cfg: &Config) -> Result<()> {
    let fwd = f_extension_maps(x, y, cfg)?;
    let bwd = f_extension_maps(y, x, cfg)?;
    if fwd.len() != 1 || bwd.len() != 1 {
        return Err(Error::Internal(format!(
            "expected unique mutual maps between universal realizations, found {} and {}",
            fwd.len(),
            bwd.len()
        )));
    }
    let idx = bwd[0].compose(&fwd[0]);
    let idy = fwd[0].compose(&bwd[0]);
    if idx != Hom::identity(&x.e) || idy != Hom::identity(&y.e) {
        return Err(Error::Internal("mutual universal maps do not compose to identity".into()));
    }
    Ok(())
}

/// The hypercentral tower over f, iterated against the original Γ.
pub struct Tower {
    pub base: Hom,
    /// stage n + 1 is an extension of U_n with structure map η_n
    pub stages: Vec<FExtension>,
    pub stabilized: bool,
    /// composite projection U_N → G
    pub composite: Hom,
}

impl Tower {
    /// The top group U_N (G itself for an empty tower).
    pub fn top(&self) -> &crate::grp::Group {
        self.stages.last().map(|x| &x.e).unwrap_or(self.base.target())
    }

    /// The current structure map Γ → U_N.
    pub fn structure_map(&self) -> &Hom {
        self.stages.last().map(|x| &x.psi).unwrap_or(&self.base)
    }
}

fn relative_h2_trivial(f: &Hom, cfg: &Config) -> Result<bool> {
    if f.is_surjective() {
        // Hopf: K/[K,Γ] trivial ⟺ [K,Γ] = K
        let gam = f.source();
        let k = kernel(f);
        let kc = commutator_subgroup(gam, &k, &whole_subgroup(gam));
        return Ok(kc.order() == k.order());
    }
    Ok(homology(&relative_complex(f, cfg)?, 2)?.group.is_trivial())
}

/// Iterate the universal construction until H₂(U_n, Γ) vanishes or
/// `max_steps` stages have been built.
pub fn schur_tower(f: &Hom, max_steps: usize, cfg: &Config) -> Result<Tower> {
    if !is_ab_surjective(f) {
        return Err(Error::Hypothesis(
            "the tower requires surjectivity on abelianizations".into(),
        ));
    }
    let mut tower = Tower {
        base: f.clone(),
        stages: Vec::new(),
        stabilized: false,
        composite: Hom::identity(f.target()),
    };
    loop {
        let fnow = tower.structure_map().clone();
        if relative_h2_trivial(&fnow, cfg)? {
            tower.stabilized = true;
            return Ok(tower);
        }
        if tower.stages.len() >= max_steps {
            return Ok(tower);
        }
        let x = universal_extension(&fnow, cfg, false)?;
        if x.e.order() > cfg.tower_order_cap {
            return Err(Error::Budget(format!(
                "tower stage order {} exceeds the cap {}",
                x.e.order(),
                cfg.tower_order_cap
            )));
        }
        tower.composite = tower.composite.compose(&x.pi);
        tower.stages.push(x);
    }
}

/// Pair a relative cocycle with a relative 2-cycle of the cone,
/// φ(x, y) = c(x) − w(y).
pub fn pair_cocycle_cycle(z: &RelCocycle2, cycle: &SparseVec) -> AbElt {
    let n = z.f.target().order();
    let k = n - 1;
    let kg2 = k * k;
    let a = &z.a;
    let exponent = a.invariant_factors().last().copied().unwrap_or(1);
    cycle.iter().fold(a.zero(), |acc, (idx, coeff)| {
        let cf = coeff
            .div_rem_euclid(&Int::from(exponent))
            .1
            .to_i64()
            .expect("reduced coefficient");
        let i = *idx as usize;
        let v = if i < kg2 {
            let gv = (i / k + 1) as u32;
            let hv = (i % k + 1) as u32;
            z.c_at(gv, hv).clone()
        } else {
            a.neg(z.w_at((i - kg2 + 1) as u32))
        };
        a.add(&acc, &a.scale(cf, &v))
    })
}

/// Exactness report for the five-term sequence
/// H₂(E,Γ) → H₂(G,Γ) → A → H₁(E,Γ) → H₁(G,Γ) → 0.
pub struct FiveTermReport {
    pub h2_e: AbGroup,
    pub h2_g: AbGroup,
    pub a: AbGroup,
    pub h1_e: AbGroup,
    pub h1_g: AbGroup,
    pub exact_at_h2_g: bool,
    pub exact_at_a: bool,
    pub exact_at_h1_e: bool,
    pub surjective_end: bool,
    pub connecting_iso: bool,
}

impl FiveTermReport {
    pub fn exact(&self) -> bool {
        self.exact_at_h2_g && self.exact_at_a && self.exact_at_h1_e && self.surjective_end
    }
}

/// Chain map between the cones of ψ: Γ → E and f: Γ → G induced by π
/// (identity on the Γ summand).
fn cone_chain_map(pi: &Hom, gamma_order: usize, n: usize) -> IntMat {
    let pg = chain_map(pi, n);
    let rows = bar_rank(pi.target().order(), n)
        + if n >= 1 { bar_rank(gamma_order, n - 1) } else { 0 };
    let mut cols: Vec<SparseVec> = Vec::new();
    for j in 0..pg.cols() {
        cols.push(pg.col(j).clone());
    }
    if n >= 1 {
        let off = bar_rank(pi.target().order(), n) as u32;
        let src_off = bar_rank(gamma_order, n - 1);
        for j in 0..src_off {
            cols.push(vec![(off + j as u32, Int::ONE)]);
        }
    }
    IntMat::from_cols(rows, cols)
}

fn induced_map(
    fmap: &IntMat,
    src: &HomologyResult,
    tgt: &HomologyResult,
) -> Result<AbMap> {
    let mut matrix = vec![vec![0i64; src.group.rank()]; tgt.group.rank()];
    for (j, z) in src.cycle_reps.iter().enumerate() {
        let image = fmap.mul_vec(z);
        for (i, &r) in tgt.project(&image).residues().iter().enumerate() {
            matrix[i][j] = r as i64;
        }
    }
    AbMap::new(src.group.clone(), tgt.group.clone(), matrix)
}

fn exact_at(first: &AbMap, second: &AbMap) -> bool {
    let composed = second.compose(first);
    let image_order = first.source().order() / first.kernel_order();
    composed.is_zero() && image_order == second.kernel_order()
}

pub fn five_term_check(x: &FExtension, cfg: &Config) -> Result<FiveTermReport> {
    let gam = x.f.source();
    let cone_e = relative_complex(&x.psi, cfg)?;
    let cone_g = relative_complex(&x.f, cfg)?;
    let h2_e = homology(&cone_e, 2)?;
    let h2_g = homology(&cone_g, 2)?;
    let h1_e = homology(&cone_e, 1)?;
    let h1_g = homology(&cone_g, 1)?;
    let z = classify(x);

    // π_*: H₂(E,Γ) → H₂(G,Γ) and H₁(E,Γ) → H₁(G,Γ)
    let pi2 = induced_map(&cone_chain_map(&x.pi, gam.order(), 2), &h2_e, &h2_g)?;
    let pi1 = induced_map(&cone_chain_map(&x.pi, gam.order(), 1), &h1_e, &h1_g)?;

    // ∂: H₂(G,Γ) → A by pairing with the extension class
    let mut dmat = vec![vec![0i64; h2_g.group.rank()]; x.a.rank()];
    for (j, cyc) in h2_g.cycle_reps.iter().enumerate() {
        for (i, &r) in pair_cocycle_cycle(&z, cyc).residues().iter().enumerate() {
            dmat[i][j] = r as i64;
        }
    }
    let connecting = AbMap::new(h2_g.group.clone(), x.a.clone(), dmat)?;

    // ι_*: A → H₁(E,Γ) through the 1-chains [ι(a)]
    let ne = x.e.order();
    let mut imat = vec![vec![0i64; x.a.rank()]; h1_e.group.rank()];
    for j in 0..x.a.rank() {
        let gen = x.a.generator(j);
        let m = x.iota[x.a.index_of(&gen) as usize];
        let chain: SparseVec = if m == 0 {
            Vec::new()
        } else {
            vec![(bar_index(ne, &[m]) as u32, Int::ONE)]
        };
        for (i, &r) in h1_e.project(&chain).residues().iter().enumerate() {
            imat[i][j] = r as i64;
        }
    }
    let iota_star = AbMap::new(x.a.clone(), h1_e.group.clone(), imat)?;

    let connecting_iso =
        connecting.is_surjective() && connecting.kernel_order() == 1;
    Ok(FiveTermReport {
        h2_e: h2_e.group,
        h2_g: h2_g.group.clone(),
        a: x.a.clone(),
        h1_e: h1_e.group.clone(),
        h1_g: h1_g.group,
        exact_at_h2_g: exact_at(&pi2, &connecting),
        exact_at_a: exact_at(&connecting, &iota_star),
        exact_at_h1_e: exact_at(&iota_star, &pi1),
        surjective_end: pi1.is_surjective(),
        connecting_iso,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    CommutingPair,
    ElementOrder,
    HomLift,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Pair(u32, u32),
    Element(u32),
    Map(Hom),
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub kind: ObstructionKind,
    pub value: Option<AbElt>,
    pub vanishes: bool,
    pub witness: Option<Witness>,
}

/// Obstruction to lifting a commuting pair: ι⁻¹[x̃, ỹ] for any
/// preimages (independent of the choice since the kernel is central).
pub fn commuting_pair_obstruction(
    x: &FExtension,
    gx: u32,
    gy: u32,
) -> Result<ObstructionReport> {
    let g = x.f.target();
    if g.mul(gx, gy) != g.mul(gy, gx) {
        return Err(Error::Hypothesis("elements do not commute".into()));
    }
    let lift = |t: u32| x.e.elements().find(|&m| x.pi.apply(m) == t).unwrap();
    let (xt, yt) = (lift(gx), lift(gy));
    let inv: BTreeMap<u32, AbElt> = x
        .a
        .elements()
        .enumerate()
        .map(|(i, av)| (x.iota[i], av))
        .collect();
    let value = inv[&x.e.commutator(xt, yt)].clone();
    // the value is invariant under changing preimages by central
    // kernel elements; recheck on all translate pairs
    for &am in &x.iota {
        for &bm in &x.iota {
            let v2 = inv[&x.e.commutator(x.e.mul(am, xt), x.e.mul(bm, yt))].clone();
            if v2 != value {
                return Err(Error::Internal("commutator obstruction depends on lifts".into()));
            }
        }
    }
    // witness search over kernel translates
    let mut witness = None;
    'search: for &am in &x.iota {
        for &bm in &x.iota {
            let (xt2, yt2) = (x.e.mul(am, xt), x.e.mul(bm, yt));
            if x.e.mul(xt2, yt2) == x.e.mul(yt2, xt2) {
                witness = Some(Witness::Pair(xt2, yt2));
                break 'search;
            }
        }
    }
    let vanishes = value.is_zero();
    if vanishes != witness.is_some() {
        return Err(Error::Internal("commuting-lift witness disagrees with the value".into()));
    }
    Ok(ObstructionReport {
        kind: ObstructionKind::CommutingPair,
        value: Some(value),
        vanishes,
        witness,
    })
}

/// Obstruction to lifting x at its own order: the class of ι⁻¹(x̃ⁿ) in
/// A / nA; vanishes iff some lift of x has order n.
pub fn order_lifting_obstruction(x: &FExtension, gx: u32) -> Result<ObstructionReport> {
    let g = x.f.target();
    let n = g.element_order(gx);
    let xt = x.e.elements().find(|&m| x.pi.apply(m) == gx).unwrap();
    let inv: BTreeMap<u32, AbElt> = x
        .a
        .elements()
        .enumerate()
        .map(|(i, av)| (x.iota[i], av))
        .collect();
    let raw = inv[&x.e.pow(xt, n)].clone();
    let (quo, proj) = x.a.mod_n(n);
    let value = proj(&raw);
    // witness: a kernel translate with order exactly n
    let witness = x
        .a
        .elements()
        .map(|av| x.e.mul(x.iota[x.a.index_of(&av) as usize], xt))
        .find(|&m| x.e.element_order(m) == n)
        .map(Witness::Element);
    let vanishes = value.is_zero();
    if vanishes != witness.is_some() {
        return Err(Error::Internal("order-lift witness disagrees with the value".into()));
    }
    let _ = quo;
    Ok(ObstructionReport {
        kind: ObstructionKind::ElementOrder,
        value: Some(value),
        vanishes,
        witness,
    })
}

/// Whether the extension class of `x` dies under pullback along
/// g: Γ₀ → G — necessary and sufficient for a homomorphic lift
/// g̃: Γ₀ → E, which is searched for as a witness.
pub fn h2_vanishing_test(g: &Hom, x: &FExtension, cfg: &Config) -> Result<ObstructionReport> {
    assert_eq!(g.target(), x.f.target());
    let gamma0 = g.source();
    let z = classify(x);
    // pull the 2-cocycle c back along g and test it for being an
    // (absolute) coboundary on Γ₀
    let n0 = gamma0.order();
    let mut c = vec![x.a.zero(); n0 * n0];
    for p in gamma0.elements() {
        for q in gamma0.elements() {
            c[p as usize * n0 + q as usize] =
                z.c_at(g.apply(p), g.apply(q)).clone();
        }
    }
    let triv = crate::grp::trivial_group();
    let fpoint = Hom::trivial(&triv, gamma0);
    let pulled = RelCocycle2::new(fpoint, x.a.clone(), c, vec![x.a.zero()])?;
    let vanishes = is_coboundary(&pulled);
    // brute-force lift search through the pullback's sections
    let pb = pullback_along(x, g, cfg)?;
    let witness = pb.sections.first().map(|s| Witness::Map(pb.to_e.compose(s)));
    if vanishes != witness.is_some() {
        return Err(Error::Internal(
            "coboundary verdict disagrees with the brute-force lift search".into(),
        ));
    }
    Ok(ObstructionReport { kind: ObstructionKind::HomLift, value: None, vanishes, witness })
}

/// Result of the maximal ab-surjective corestriction-target search.
pub enum MaximalTarget {
    /// The join of all maximal passers, which itself passes.
    Unique { subgroup: Subgroup, corestriction: Hom },
    /// Maximal passers whose join fails the filter; no canonical
    /// choice is made.
    Ambiguous(Vec<Subgroup>),
}

/// The largest normal subgroup B ⊆ G containing im(f) such that the
/// corestriction Γ → B is surjective on abelianizations.
pub fn maximal_ab_surjective_target(f: &Hom, cfg: &Config) -> Result<MaximalTarget> {
    let g = f.target();
    let normals = normal_subgroups(g, cfg)?;
    let passes = |b: &Subgroup| -> Option<Hom> {
        if f.image_table().iter().any(|&v| !b.contains(v)) {
            return None;
        }
        let (bg, incl) = subgroup_as_group(b);
        let idx: BTreeMap<u32, u32> = incl
            .image_table()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let table: Vec<u32> = f.image_table().iter().map(|&v| idx[&v]).collect();
        let fb = Hom::new(f.source().clone(), bg, table, cfg).ok()?;
        is_ab_surjective(&fb).then_some(fb)
    };
    let passers: Vec<&Subgroup> = normals.iter().filter(|b| passes(b).is_some()).collect();
    let maximal: Vec<&Subgroup> = passers
        .iter()
        .filter(|b| {
            !passers.iter().any(|c| {
                c.order() > b.order() && b.members().iter().all(|&m| c.contains(m))
            })
        })
        .copied()
        .collect();
    let mut join_gens: Vec<u32> = Vec::new();
    for b in &maximal {
        join_gens.extend_from_slice(b.members());
    }
    let join = crate::grp::generated_subgroup(g, &join_gens);
    match passes(&join) {
        Some(fb) => Ok(MaximalTarget::Unique { subgroup: join, corestriction: fb }),
        None => Ok(MaximalTarget::Ambiguous(maximal.into_iter().cloned().collect())),
    }
}

/// Report of the universality battery: unique-map checks over the
/// enumerable classes, tower acyclicity, and sampled initial/terminal
/// checks.
pub struct SuiteReport {
    pub tower: Tower,
    pub h1_top_trivial: bool,
    pub h2_top_trivial: bool,
    pub unique_maps_ok: bool,
    pub classes_checked: usize,
    pub initial_ok: bool,
    pub initial_checked: usize,
    pub terminal_ok: bool,
    pub terminal_checked: usize,
}

impl SuiteReport {
    pub fn all_ok(&self) -> bool {
        self.tower.stabilized
            && self.h1_top_trivial
            && self.h2_top_trivial
            && self.unique_maps_ok
            && self.initial_ok
            && self.terminal_ok
    }
}

/// All homomorphisms t: M → N commuting with projections to G and with
/// the structure maps from Γ (generalized extension maps; no
/// centrality assumption on the targets).
fn maps_over(
    m: &crate::grp::Group,
    m_pi: &Hom,
    m_psi: &Hom,
    n: &crate::grp::Group,
    n_pi: &Hom,
    n_psi: &Hom,
    cfg: &Config,
) -> Result<Vec<Hom>> {
    if m.order() > cfg.map_search_cap {
        return Err(Error::Budget(format!(
            "extension map search is limited to |E| ≤ {}",
            cfg.map_search_cap
        )));
    }
    let gens = crate::ext::generating_set(m);
    let fibers: Vec<Vec<u32>> = gens
        .iter()
        .map(|&gm| {
            let t = m_pi.apply(gm);
            n.elements().filter(|&x| n_pi.apply(x) == t).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<u32> = pick.iter().zip(&fibers).map(|(&i, f)| f[i]).collect();
        if let Ok(t) = crate::grp::hom_from_generator_images(m, n, &gens, &images, cfg) {
            let ok = m_psi
                .source()
                .elements()
                .all(|gamma| t.apply(m_psi.apply(gamma)) == n_psi.apply(gamma))
                && m.elements().all(|x| n_pi.apply(t.apply(x)) == m_pi.apply(x));
            if ok && !out.contains(&t) {
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

pub fn universality_suite(f: &Hom, cfg: &Config) -> Result<SuiteReport> {
    let u = universal_extension(f, cfg, false)?;
    // (a) unique map from U to every class within the enumeration budget
    let coefficient_groups = [
        AbGroup::cyclic(2),
        AbGroup::cyclic(3),
        AbGroup::cyclic(4),
        AbGroup::from_invariant_factors(vec![2, 2]).unwrap(),
    ];
    let mut unique_maps_ok = true;
    let mut classes_checked = 0;
    if f.target().order() <= cfg.class_g && f.source().order() <= cfg.class_gamma {
        for a in &coefficient_groups {
            for x in crate::ext::enumerate_classes(f, a, cfg)? {
                classes_checked += 1;
                if f_extension_maps(&u, &x, cfg)?.len() != 1 {
                    unique_maps_ok = false;
                }
            }
        }
    }
    // (b) tower acyclicity at the top
    let tower = schur_tower(f, 16, cfg)?;
    let ftop = tower.structure_map();
    let cone = relative_complex(ftop, cfg)?;
    let h1_top_trivial = homology(&cone, 1)?.group.is_trivial();
    let h2_top_trivial = homology(&cone, 2)?.group.is_trivial();

    // (c) initial among sampled hypercentral extensions: composites of
    // ≤ 2 central stages built from the enumerable classes
    let mut initial_ok = true;
    let mut initial_checked = 0;
    let top = tower.top().clone();
    let top_pi = tower.composite.clone();
    let top_psi = tower.structure_map().clone();
    if f.target().order() <= cfg.class_g && f.source().order() <= cfg.class_gamma {
        let a2 = AbGroup::cyclic(2);
        for stage1 in crate::ext::enumerate_classes(f, &a2, cfg)? {
            // one-stage hypercentral extension
            if stage1.e.order() <= 128 {
                initial_checked += 1;
                let maps =
                    maps_over(&top, &top_pi, &top_psi, &stage1.e, &stage1.pi, &stage1.psi, cfg)?;
                if maps.len() != 1 {
                    initial_ok = false;
                }
            }
            // second central stage over the first
            if stage1.e.order() <= cfg.class_g {
                for stage2 in crate::ext::enumerate_classes(&stage1.psi, &a2, cfg)? {
                    if stage2.e.order() > 128 {
                        continue;
                    }
                    initial_checked += 1;
                    let pi2 = stage1.pi.compose(&stage2.pi);
                    let maps =
                        maps_over(&top, &top_pi, &top_psi, &stage2.e, &pi2, &stage2.psi, cfg)?;
                    if maps.len() != 1 {
                        initial_ok = false;
                    }
                }
            }
        }
    }

    // (d) terminal among sampled acyclic factorizations: the top of the
    // tower itself, and a freshly rebuilt copy
    let mut terminal_ok = true;
    let mut terminal_checked = 0;
    {
        let rebuilt = schur_tower(f, 16, cfg)?;
        for (m, m_pi, m_psi) in [
            (&top, &top_pi, &top_psi),
            (rebuilt.top(), &rebuilt.composite, rebuilt.structure_map()),
        ] {
            terminal_checked += 1;
            let maps = maps_over(m, m_pi, m_psi, &top, &top_pi, &top_psi, cfg)?;
            if maps.len() != 1 {
                terminal_ok = false;
            }
        }
    }

    Ok(SuiteReport {
        tower,
        h1_top_trivial,
        h2_top_trivial,
        unique_maps_ok,
        classes_checked,
        initial_ok,
        initial_checked,
        terminal_ok,
        terminal_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{
        cyclic_group, dihedral_group, hom_from_generator_images, quaternion_group,
        symmetric_group, trivial_group,
    };

    fn cfg() -> Config {
        Config::default()
    }

    fn q8_mod_center() -> Hom {
        let q8 = quaternion_group();
        let (quo, proj) = quotient(&q8, &crate::grp::center(&q8)).unwrap();
        Hom::new(q8, quo, proj.image_table().to_vec(), &cfg()).unwrap()
    }

    fn s3_sign() -> Hom {
        let s3 = symmetric_group(3, &cfg()).unwrap();
        let z2 = cyclic_group(2);
        let refl = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let rot = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        hom_from_generator_images(&s3, &z2, &[refl, rot], &[1, 0], &cfg()).unwrap()
    }

    fn reduction_z4_z2() -> Hom {
        hom_from_generator_images(&cyclic_group(4), &cyclic_group(2), &[1], &[1], &cfg()).unwrap()
    }

    #[test]
    fn hopf_examples() {
        let (a, _, x) = hopf_surjective(&q8_mod_center(), &cfg()).unwrap();
        assert_eq!(a.invariant_factors(), &[2]);
        assert_eq!(x.e.order(), 8);

        let (a, _, x) = hopf_surjective(&s3_sign(), &cfg()).unwrap();
        assert!(a.is_trivial());
        assert_eq!(x.e.order(), 2);

        let (a, eta, x) = hopf_surjective(&reduction_z4_z2(), &cfg()).unwrap();
        assert_eq!(a.invariant_factors(), &[2]);
        assert_eq!(x.e.order(), 4);
        assert!(eta.is_injective() && eta.is_surjective());
    }

    #[test]
    fn hopf_requires_surjective() {
        let f = Hom::trivial(&trivial_group(), &cyclic_group(2));
        assert!(matches!(hopf_surjective(&f, &cfg()), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn universal_verified_agreement() {
        for f in [q8_mod_center(), reduction_z4_z2(), s3_sign()] {
            let x = universal_extension(&f, &cfg(), true).unwrap();
            assert!(is_ab_surjective(&x.psi));
        }
    }

    #[test]
    fn universal_d4_abelianization() {
        let d4 = dihedral_group(4);
        let (ab, coords) = abelianization(&d4);
        assert_eq!(ab.invariant_factors(), &[2, 2]);
        // realize D₄ → D₄_ab as a Hom onto Z/2 × Z/2 via the quotient
        let comm = commutator_subgroup(&d4, &whole_subgroup(&d4), &whole_subgroup(&d4));
        let (quo, proj) = quotient(&d4, &comm).unwrap();
        let f = Hom::new(d4, quo, proj.image_table().to_vec(), &cfg()).unwrap();
        let _ = coords;
        let x = universal_extension(&f, &cfg(), true).unwrap();
        assert_eq!(x.a.invariant_factors(), &[2]);
        assert_eq!(x.e.order(), 8);
    }

    #[test]
    fn universal_requires_ab_surjective() {
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        let f = hom_from_generator_images(&z2, &z4, &[1], &[2], &cfg()).unwrap();
        assert!(matches!(universal_extension(&f, &cfg(), false), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn towers() {
        // S₃ ↠ Z/2: length 0, U∞ = Z/2
        let t = schur_tower(&s3_sign(), 8, &cfg()).unwrap();
        assert!(t.stabilized);
        assert_eq!(t.stages.len(), 0);
        assert_eq!(t.top().order(), 2);

        // Q₈ ↠ V₄: one stage, U∞ = Q₈
        let t = schur_tower(&q8_mod_center(), 8, &cfg()).unwrap();
        assert!(t.stabilized);
        assert_eq!(t.stages.len(), 1);
        assert_eq!(t.top().order(), 8);
        assert_eq!(t.stages[0].a.invariant_factors(), &[2]);
        // |U_{n+1}| = |U_n| · |H₂|
        assert_eq!(t.stages[0].e.order() as u128, 4 * t.stages[0].a.order());

        // f = id: length 0
        let z6 = cyclic_group(6);
        let t = schur_tower(&Hom::identity(&z6), 8, &cfg()).unwrap();
        assert!(t.stabilized && t.stages.is_empty());
    }

    #[test]
    fn five_term_universal_q8() {
        let x = universal_extension(&q8_mod_center(), &cfg(), false).unwrap();
        let r = five_term_check(&x, &cfg()).unwrap();
        assert!(r.exact());
        assert!(r.connecting_iso);
        assert!(r.h1_e.is_trivial());
    }

    #[test]
    fn five_term_split() {
        let f = reduction_z4_z2();
        let a = AbGroup::cyclic(2);
        let x = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        let r = five_term_check(&x, &cfg()).unwrap();
        assert!(r.exact());
        // the class is trivial, so the connecting map vanishes and A
        // injects into H₁(E,Γ)
        assert!(!r.connecting_iso || r.a.is_trivial());
    }

    #[test]
    fn five_term_identity_base() {
        let z4 = cyclic_group(4);
        let f = Hom::identity(&z4);
        let a = AbGroup::cyclic(2);
        let x = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        let r = five_term_check(&x, &cfg()).unwrap();
        assert!(r.exact());
    }

    #[test]
    fn commuting_pair_small() {
        // split extension: every commuting pair lifts
        let f = reduction_z4_z2();
        let a = AbGroup::cyclic(2);
        let x = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        let r = commuting_pair_obstruction(&x, 1, 1).unwrap();
        assert!(r.vanishes);
        assert!(matches!(r.witness, Some(Witness::Pair(_, _))));
    }

    #[test]
    fn order_obstruction_z4_over_z2() {
        // E = Z/4 over G = Z/2: the generator has no order-2 lift
        let x = universal_extension(&reduction_z4_z2(), &cfg(), false).unwrap();
        let r = order_lifting_obstruction(&x, 1).unwrap();
        assert!(!r.vanishes);
        assert!(r.witness.is_none());
        // identity always lifts at order 1
        let r0 = order_lifting_obstruction(&x, 0).unwrap();
        assert!(r0.vanishes);
    }

    #[test]
    fn h2_vanishing_small() {
        let f = reduction_z4_z2();
        let a = AbGroup::cyclic(2);
        let split = extension_from_cocycle(&RelCocycle2::zero(&f, &a), &cfg()).unwrap();
        // trivial source always lifts
        let gt = Hom::trivial(&trivial_group(), f.target());
        let r = h2_vanishing_test(&gt, &split, &cfg()).unwrap();
        assert!(r.vanishes && r.witness.is_some());
        // split extension lifts everything
        let idg = Hom::identity(f.target());
        let r = h2_vanishing_test(&idg, &split, &cfg()).unwrap();
        assert!(r.vanishes);
        // the nonsplit Z/4 over Z/2 does not lift the identity
        let x = universal_extension(&f, &cfg(), false).unwrap();
        let r = h2_vanishing_test(&idg, &x, &cfg()).unwrap();
        assert!(!r.vanishes && r.witness.is_none());
    }

    #[test]
    fn maximal_targets() {
        // f ab-surjective onto G → B = G
        let f = s3_sign();
        match maximal_ab_surjective_target(&f, &cfg()).unwrap() {
            MaximalTarget::Unique { subgroup, .. } => {
                assert_eq!(subgroup.order(), 2);
            }
            MaximalTarget::Ambiguous(_) => panic!("expected a unique target"),
        }
        // f: 1 → S₃ → only the trivial subgroup passes
        let s3 = symmetric_group(3, &cfg()).unwrap();
        let f = Hom::trivial(&trivial_group(), &s3);
        match maximal_ab_surjective_target(&f, &cfg()).unwrap() {
            MaximalTarget::Unique { subgroup, .. } => assert!(subgroup.is_trivial()),
            MaximalTarget::Ambiguous(_) => panic!("expected a unique target"),
        }
    }

    #[test]
    fn suite_q8() {
        let report = universality_suite(&q8_mod_center(), &cfg()).unwrap();
        assert!(report.all_ok(), "universality suite failed");
        assert_eq!(report.tower.top().order(), 8);
        assert!(report.classes_checked > 0);
    }

    #[test]
    fn suite_identity() {
        let z4 = cyclic_group(4);
        let report = universality_suite(&Hom::identity(&z4), &cfg()).unwrap();
        assert!(report.all_ok());
        assert_eq!(report.tower.top().order(), 4);
    }

    #[test]
    fn tower_composite_is_projection() {
        let t = schur_tower(&q8_mod_center(), 8, &cfg()).unwrap();
        // composite ∘ structure map = f
        let f = &t.base;
        for gamma in f.source().elements() {
            assert_eq!(
                t.composite.apply(t.structure_map().apply(gamma)),
                f.apply(gamma)
            );
        }
    }
}
