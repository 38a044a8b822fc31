//! Finite groups as validated multiplication tables, homomorphisms,
//! and subgroup machinery.
//!
//! Element 0 is always the identity; coset representatives are
//! least-index; every enumeration order is fixed by element index, so
//! all downstream output is bit-reproducible.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgrp::{AbElt, AbGroup};
use crate::zmat::{smith_normal_form, IntMat};
use crate::{Config, Error, Result};

struct Table {
    n: usize,
    /// row-major: mul[a * n + b] = a·b
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// Finite group on elements `0..order`, identity at 0.
#[derive(Clone)]
pub struct Group {
    t: Arc<Table>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.n == other.t.n && self.t.mul == other.t.mul)
    }
}
impl Eq for Group {}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group(order {})", self.t.n)
    }
}

impl Group {
    pub fn order(&self) -> usize {
        self.t.n
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.t.mul[a as usize * self.t.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.t.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.t.n as u32
    }

    pub fn conj(&self, g: u32, x: u32) -> u32 {
        // x conjugated by g: g⁻¹ x g
        self.mul(self.inv(g), self.mul(x, g))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.inv(a), self.mul(self.inv(b), self.mul(a, b)))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.t.n as u32;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }
}

/// Validate and wrap a raw multiplication table.
pub fn group_from_table(mul: Vec<Vec<u32>>, cfg: &Config) -> Result<Group> {
    let n = mul.len();
    if n == 0 {
        return Err(Error::MalformedTable("empty table".into()));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in mul.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
        }
        for &v in row {
            if v as usize >= n {
                return Err(Error::MalformedTable(format!("entry {v} out of range in row {i}")));
            }
            flat.push(v);
        }
    }
    // identity at 0
    for a in 0..n as u32 {
        if flat[a as usize] != a || flat[a as usize * n] != a {
            return Err(Error::MalformedTable(format!("element 0 is not an identity at {a}")));
        }
    }
    // rows and columns are permutations
    for a in 0..n {
        let mut seen_r = vec![false; n];
        let mut seen_c = vec![false; n];
        for b in 0..n {
            let r = flat[a * n + b] as usize;
            let c = flat[b * n + a] as usize;
            if seen_r[r] {
                return Err(Error::MalformedTable(format!("row {a} repeats value {r}")));
            }
            if seen_c[c] {
                return Err(Error::MalformedTable(format!("column {a} repeats value {c}")));
            }
            seen_r[r] = true;
            seen_c[c] = true;
        }
    }
    // inverses (rows are permutations, so b with ab = 0 exists)
    let mut inv = vec![0u32; n];
    for a in 0..n {
        let b = (0..n).find(|&b| flat[a * n + b] == 0).unwrap();
        if flat[b * n + a] != 0 {
            return Err(Error::MalformedTable(format!("{a} has no two-sided inverse")));
        }
        inv[a] = b as u32;
    }
    // associativity
    let check = |a: usize, b: usize, c: usize| -> bool {
        flat[flat[a * n + b] as usize * n + c] == flat[a * n + flat[b * n + c] as usize]
    };
    if n <= cfg.exhaustive_check_cap {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !check(a, b, c) {
                        return Err(Error::MalformedTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x52454C45585431);
        for _ in 0..cfg.assoc_samples {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if !check(a, b, c) {
                return Err(Error::MalformedTable(format!(
                    "associativity fails at ({a}, {b}, {c})"
                )));
            }
        }
    }
    Ok(Group { t: Arc::new(Table { n, mul: flat, inv }) })
}

/// Closure of permutation generators on `0..degree`, breadth-first from
/// the identity with generators taken in input order.
pub fn group_from_permutations(
    degree: usize,
    generators: &[Vec<u32>],
    cfg: &Config,
) -> Result<Group> {
    for g in generators {
        let mut seen = vec![false; degree];
        if g.len() != degree {
            return Err(Error::Invalid("generator has wrong degree".into()));
        }
        for &v in g {
            if v as usize >= degree || seen[v as usize] {
                return Err(Error::Invalid("generator is not a permutation".into()));
            }
            seen[v as usize] = true;
        }
    }
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut index: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    let mut elems: Vec<Vec<u32>> = vec![id.clone()];
    index.insert(id, 0);
    let mut queue = VecDeque::from([0u32]);
    while let Some(xi) = queue.pop_front() {
        let x = elems[xi as usize].clone();
        for g in generators {
            // x·g acts by g first, then x
            let prod: Vec<u32> = g.iter().map(|&p| x[p as usize]).collect();
            if !index.contains_key(&prod) {
                if elems.len() >= cfg.order_cap {
                    return Err(Error::SizeLimit { cap: cfg.order_cap, reached: elems.len() + 1 });
                }
                let ni = elems.len() as u32;
                index.insert(prod.clone(), ni);
                elems.push(prod);
                queue.push_back(ni);
            }
        }
    }
    let n = elems.len();
    let mut mul = vec![0u32; n * n];
    for (ai, a) in elems.iter().enumerate() {
        for (bi, b) in elems.iter().enumerate() {
            let prod: Vec<u32> = b.iter().map(|&p| a[p as usize]).collect();
            mul[ai * n + bi] = index[&prod];
        }
    }
    let mut inv = vec![0u32; n];
    for a in 0..n {
        inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).expect("group closure") as u32;
    }
    Ok(Group { t: Arc::new(Table { n, mul, inv }) })
}

// ---------------------------------------------------------------------
// named groups

pub fn trivial_group() -> Group {
    Group { t: Arc::new(Table { n: 1, mul: vec![0], inv: vec![0] }) }
}

pub fn cyclic_group(n: usize) -> Group {
    assert!(n >= 1);
    let mut mul = vec![0u32; n * n];
    let mut inv = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = ((a + b) % n) as u32;
        }
        inv[a] = ((n - a) % n) as u32;
    }
    Group { t: Arc::new(Table { n, mul, inv }) }
}

/// Dihedral group of order 2n: rotations at indices 0..n, reflections
/// at n..2n.
pub fn dihedral_group(n: usize) -> Group {
    assert!(n >= 1);
    let sz = 2 * n;
    let idx = |i: usize, e: usize| (e * n + i) as u32;
    let mut mul = vec![0u32; sz * sz];
    for i in 0..n {
        for e in 0..2 {
            for j in 0..n {
                for f in 0..2 {
                    // (i,e)(j,f): rotation part i ± j depending on e
                    let k = if e == 0 { (i + j) % n } else { (i + n - j % n) % n };
                    mul[(idx(i, e) as usize) * sz + idx(j, f) as usize] = idx(k, (e + f) % 2);
                }
            }
        }
    }
    let mut inv = vec![0u32; sz];
    for a in 0..sz {
        inv[a] = (0..sz).find(|&b| mul[a * sz + b] == 0).unwrap() as u32;
    }
    Group { t: Arc::new(Table { n: sz, mul, inv }) }
}

/// The quaternion group of order 8: elements 1, −1, i, −i, j, −j, k, −k.
pub fn quaternion_group() -> Group {
    // (sign, axis) with axis 0 = scalar, 1 = i, 2 = j, 3 = k
    let code = |s: usize, axis: usize| {
        // index: 1, −1, i, −i, j, −j, k, −k
        (2 * axis + s) as u32
    };
    let decode = |x: usize| (x % 2, x / 2);
    // quaternion basis products: table[a][b] = (sign, axis) for eₐ·e_b
    let basis = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) => (0, x),
            (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    let n = 8;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let (sx, ax) = decode(x);
            let (sy, ay) = decode(y);
            let (sp, ap) = basis(ax, ay);
            mul[x * n + y] = code((sx + sy + sp) % 2, ap);
        }
    }
    let mut inv = vec![0u32; n];
    for a in 0..n {
        inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).unwrap() as u32;
    }
    Group { t: Arc::new(Table { n, mul, inv }) }
}

pub fn symmetric_group(n: usize, cfg: &Config) -> Result<Group> {
    assert!(n >= 1);
    if n == 1 {
        return Ok(trivial_group());
    }
    let mut gens = vec![transposition(n, 0, 1)];
    if n > 2 {
        gens.push(cycle(n, &(0..n as u32).collect::<Vec<_>>()));
    }
    group_from_permutations(n, &gens, cfg)
}

pub fn alternating_group(n: usize, cfg: &Config) -> Result<Group> {
    assert!(n >= 1);
    if n <= 2 {
        return Ok(trivial_group());
    }
    let gens: Vec<Vec<u32>> =
        (0..n - 2).map(|i| cycle(n, &[i as u32, i as u32 + 1, i as u32 + 2])).collect();
    group_from_permutations(n, &gens, cfg)
}

pub fn klein_four_group() -> Group {
    direct_product(&cyclic_group(2), &cyclic_group(2))
}

fn transposition(degree: usize, a: u32, b: u32) -> Vec<u32> {
    let mut p: Vec<u32> = (0..degree as u32).collect();
    p.swap(a as usize, b as usize);
    p
}

fn cycle(degree: usize, pts: &[u32]) -> Vec<u32> {
    let mut p: Vec<u32> = (0..degree as u32).collect();
    for w in 0..pts.len() {
        p[pts[w] as usize] = pts[(w + 1) % pts.len()];
    }
    p
}

/// Direct product; element `(a, b)` has index `a·|B| + b`.
pub fn direct_product(a: &Group, b: &Group) -> Group {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let (xa, xb) = ((x / nb) as u32, (x % nb) as u32);
            let (ya, yb) = ((y / nb) as u32, (y % nb) as u32);
            mul[x * n + y] = a.mul(xa, ya) * nb as u32 + b.mul(xb, yb);
        }
    }
    let mut inv = vec![0u32; n];
    for x in 0..n {
        let (xa, xb) = ((x / nb) as u32, (x % nb) as u32);
        inv[x] = a.inv(xa) * nb as u32 + b.inv(xb);
    }
    Group { t: Arc::new(Table { n, mul, inv }) }
}

// ---------------------------------------------------------------------
// homomorphisms

/// Homomorphism between finite groups, stored as the full image table.
#[derive(Clone, PartialEq, Eq)]
pub struct Hom {
    source: Group,
    target: Group,
    image: Vec<u32>,
}

impl std::fmt::Debug for Hom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hom({} -> {})", self.source.order(), self.target.order())
    }
}

impl Hom {
    /// Checked construction from a full image table.
    pub fn new(source: Group, target: Group, image: Vec<u32>, cfg: &Config) -> Result<Hom> {
        if image.len() != source.order() {
            return Err(Error::NotAHomomorphism("image table has wrong length".into()));
        }
        if image.iter().any(|&v| v as usize >= target.order()) {
            return Err(Error::NotAHomomorphism("image element out of range".into()));
        }
        if image[0] != 0 {
            return Err(Error::NotAHomomorphism("identity must map to identity".into()));
        }
        let n = source.order();
        let check = |x: u32, y: u32| -> bool {
            image[source.mul(x, y) as usize]
                == target.mul(image[x as usize], image[y as usize])
        };
        if n <= cfg.exhaustive_check_cap {
            for x in 0..n as u32 {
                for y in 0..n as u32 {
                    if !check(x, y) {
                        return Err(Error::NotAHomomorphism(format!(
                            "multiplicativity fails at ({x}, {y})"
                        )));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x52454C45585432);
            for _ in 0..cfg.assoc_samples {
                let (x, y) = (rng.gen_range(0..n) as u32, rng.gen_range(0..n) as u32);
                if !check(x, y) {
                    return Err(Error::NotAHomomorphism(format!(
                        "multiplicativity fails at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Hom { source, target, image })
    }

    pub fn identity(g: &Group) -> Hom {
        Hom { source: g.clone(), target: g.clone(), image: g.elements().collect() }
    }

    /// The constant-identity map.
    pub fn trivial(source: &Group, target: &Group) -> Hom {
        Hom { source: source.clone(), target: target.clone(), image: vec![0; source.order()] }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.image[x as usize]
    }

    pub fn image_table(&self) -> &[u32] {
        &self.image
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Hom) -> Hom {
        assert_eq!(other.target, self.source, "composition mismatch");
        Hom {
            source: other.source.clone(),
            target: self.target.clone(),
            image: other.image.iter().map(|&x| self.image[x as usize]).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &v in &self.image {
            seen[v as usize] = true;
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().filter(|&&v| v == 0).count() == 1
    }
}

/// Extend generator images to a full homomorphism.
pub fn hom_from_generator_images(
    source: &Group,
    target: &Group,
    gens: &[u32],
    images: &[u32],
    cfg: &Config,
) -> Result<Hom> {
    assert_eq!(gens.len(), images.len());
    let n = source.order();
    let mut map: Vec<Option<u32>> = vec![None; n];
    map[0] = Some(0);
    let mut queue = VecDeque::from([0u32]);
    while let Some(x) = queue.pop_front() {
        let u = map[x as usize].unwrap();
        for (&g, &h) in gens.iter().zip(images) {
            let xg = source.mul(x, g);
            let uh = target.mul(u, h);
            match map[xg as usize] {
                Some(prev) => {
                    if prev != uh {
                        return Err(Error::NotAHomomorphism(format!(
                            "generator images violate a relation at element {xg}"
                        )));
                    }
                }
                None => {
                    map[xg as usize] = Some(uh);
                    queue.push_back(xg);
                }
            }
        }
    }
    if map.iter().any(Option::is_none) {
        return Err(Error::DoesNotGenerate);
    }
    let image: Vec<u32> = map.into_iter().map(Option::unwrap).collect();
    Hom::new(source.clone(), target.clone(), image, cfg)
}

// ---------------------------------------------------------------------
// subgroups

/// Subgroup given by its sorted member set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    parent: Group,
    members: Vec<u32>,
}

impl Subgroup {
    /// Constructor for member sets already known to be subgroups
    /// (e.g. fibered products); members must be sorted and contain 0.
    pub(crate) fn new_unchecked(parent: Group, members: Vec<u32>) -> Subgroup {
        Subgroup { parent, members }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    pub fn is_normal(&self) -> bool {
        self.parent
            .elements()
            .all(|g| self.members.iter().all(|&x| self.contains(self.parent.conj(g, x))))
    }
}

/// Subgroup generated by a set of elements.
pub fn generated_subgroup(g: &Group, seed: &[u32]) -> Subgroup {
    let mut members = BTreeSet::from([0u32]);
    let mut queue: VecDeque<u32> = VecDeque::from([0]);
    let push = |members: &mut BTreeSet<u32>, queue: &mut VecDeque<u32>, x: u32| {
        if members.insert(x) {
            queue.push_back(x);
        }
    };
    for &s in seed {
        push(&mut members, &mut queue, s);
    }
    while let Some(x) = queue.pop_front() {
        let snapshot: Vec<u32> = members.iter().copied().collect();
        for y in snapshot {
            push(&mut members, &mut queue, g.mul(x, y));
            push(&mut members, &mut queue, g.mul(y, x));
        }
        push(&mut members, &mut queue, g.inv(x));
    }
    Subgroup { parent: g.clone(), members: members.into_iter().collect() }
}

pub fn trivial_subgroup(g: &Group) -> Subgroup {
    Subgroup { parent: g.clone(), members: vec![0] }
}

pub fn whole_subgroup(g: &Group) -> Subgroup {
    Subgroup { parent: g.clone(), members: g.elements().collect() }
}

pub fn kernel(h: &Hom) -> Subgroup {
    let members: Vec<u32> =
        h.source().elements().filter(|&x| h.apply(x) == 0).collect();
    Subgroup { parent: h.source().clone(), members }
}

pub fn image(h: &Hom) -> Subgroup {
    let set: BTreeSet<u32> = h.image_table().iter().copied().collect();
    Subgroup { parent: h.target().clone(), members: set.into_iter().collect() }
}

/// Smallest normal subgroup of `g` containing `seed`.
pub fn normal_closure(g: &Group, seed: &[u32]) -> Subgroup {
    let mut gens: BTreeSet<u32> = seed.iter().copied().collect();
    loop {
        let sub = generated_subgroup(g, &gens.iter().copied().collect::<Vec<_>>());
        let mut grew = false;
        for &x in sub.members() {
            for c in g.elements() {
                let y = g.conj(c, x);
                if !sub.contains(y) && gens.insert(y) {
                    grew = true;
                }
            }
        }
        if !grew {
            return sub;
        }
    }
}

/// Normal closure of all commutators `[h₁, h₂]`, h₁ ∈ H₁, h₂ ∈ H₂.
pub fn commutator_subgroup(g: &Group, h1: &Subgroup, h2: &Subgroup) -> Subgroup {
    let mut comms = BTreeSet::new();
    for &a in h1.members() {
        for &b in h2.members() {
            comms.insert(g.commutator(a, b));
        }
    }
    normal_closure(g, &comms.into_iter().collect::<Vec<_>>())
}

pub fn center(g: &Group) -> Subgroup {
    let members: Vec<u32> = g
        .elements()
        .filter(|&x| g.elements().all(|y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Subgroup { parent: g.clone(), members }
}

/// Quotient by a normal subgroup: group on least-index coset
/// representatives plus the projection.
pub fn quotient(g: &Group, nsub: &Subgroup) -> Result<(Group, Hom)> {
    assert_eq!(nsub.parent(), g);
    for c in g.elements() {
        for &x in nsub.members() {
            let y = g.conj(c, x);
            if !nsub.contains(y) {
                return Err(Error::NotNormal { elem: x as usize, by: c as usize });
            }
        }
    }
    let n = g.order();
    let mut coset_rep = vec![u32::MAX; n];
    let mut reps: Vec<u32> = Vec::new();
    for x in g.elements() {
        if coset_rep[x as usize] == u32::MAX {
            // x is the least element of its coset (ascending scan)
            reps.push(x);
            for &k in nsub.members() {
                let y = g.mul(x, k);
                if coset_rep[y as usize] == u32::MAX {
                    coset_rep[y as usize] = x;
                } else {
                    coset_rep[y as usize] = coset_rep[y as usize].min(x);
                }
            }
        }
    }
    // normality makes xN = Nx, so the scan above labels each element once
    let rep_index: BTreeMap<u32, u32> =
        reps.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    let q = reps.len();
    let mut mul = vec![0u32; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mul[i * q + j] = rep_index[&coset_rep[g.mul(a, b) as usize]];
        }
    }
    let mut inv = vec![0u32; q];
    for i in 0..q {
        inv[i] = (0..q).find(|&j| mul[i * q + j] == 0).unwrap() as u32;
    }
    let quo = Group { t: Arc::new(Table { n: q, mul, inv }) };
    let proj_image: Vec<u32> =
        g.elements().map(|x| rep_index[&coset_rep[x as usize]]).collect();
    let proj = Hom { source: g.clone(), target: quo.clone(), image: proj_image };
    Ok((quo, proj))
}

/// Realize a subgroup as a group in its own right (members in sorted
/// order) together with the inclusion.
pub fn subgroup_as_group(s: &Subgroup) -> (Group, Hom) {
    let g = s.parent();
    let members = s.members();
    let n = members.len();
    let idx: BTreeMap<u32, u32> =
        members.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let mut mul = vec![0u32; n * n];
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            mul[i * n + j] = idx[&g.mul(a, b)];
        }
    }
    let mut inv = vec![0u32; n];
    for (i, &a) in members.iter().enumerate() {
        inv[i] = idx[&g.inv(a)];
    }
    let sub = Group { t: Arc::new(Table { n, mul, inv }) };
    let incl = Hom { source: sub.clone(), target: g.clone(), image: members.to_vec() };
    (sub, incl)
}

// ---------------------------------------------------------------------
// abelianization and series

/// `G/[G,G]` in invariant-factor form, with the projection as an
/// element-indexed table of coordinates.
pub fn abelianization(g: &Group) -> (AbGroup, Vec<AbElt>) {
    let comm = commutator_subgroup(g, &whole_subgroup(g), &whole_subgroup(g));
    let (q, proj) = quotient(g, &comm).expect("commutator subgroup is normal");
    // present the abelian quotient on all its elements:
    // relations e_a + e_b − e_{ab} = 0
    let n = q.order();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for a in 0..n as u32 {
        for b in a..n as u32 {
            let mut col = vec![0i64; n];
            col[a as usize] += 1;
            col[b as usize] += 1;
            col[q.mul(a, b) as usize] -= 1;
            if col.iter().any(|&v| v != 0) {
                cols.push(col);
            }
        }
    }
    let dense: Vec<Vec<i64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let m = IntMat::from_dense(&dense);
    let snf = smith_normal_form(&m);
    let diag = snf.s.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    debug_assert_eq!(rank, n, "finite abelian presentation must have full row rank");
    // coordinates of e_x in ⊕ Z/sᵢ are the rows of U applied to e_x,
    // keeping the rows with sᵢ > 1
    let torsion_rows: Vec<usize> = (0..n)
        .filter(|&i| diag[i].to_i64().map(|v| v > 1).unwrap_or(true))
        .collect();
    let factors: Vec<u64> = torsion_rows
        .iter()
        .map(|&i| diag[i].to_i64().expect("group order bounds the factors") as u64)
        .collect();
    let ab = AbGroup::from_moduli(&factors);
    debug_assert_eq!(ab.invariant_factors(), &factors[..], "SNF already yields a chain");
    let coords: Vec<AbElt> = g
        .elements()
        .map(|x| {
            let qx = proj.apply(x);
            let raw: Vec<crate::zmat::Int> =
                torsion_rows.iter().map(|&i| snf.u.get(i, qx as usize)).collect();
            ab.elt_from_ints(&raw)
        })
        .collect();
    (ab, coords)
}

/// True iff `image(f)` together with `[G,G]` generates `G`, i.e. the
/// induced map on abelianizations is surjective.
pub fn is_ab_surjective(f: &Hom) -> bool {
    let g = f.target();
    let comm = commutator_subgroup(g, &whole_subgroup(g), &whole_subgroup(g));
    let mut gens: Vec<u32> = comm.members().to_vec();
    gens.extend(f.image_table().iter().copied());
    generated_subgroup(g, &gens).order() == g.order()
}

/// γ₁ = G, γ_{i+1} = [γᵢ, G], listed until stable.
pub fn lower_central_series(g: &Group) -> Vec<Subgroup> {
    let mut series = vec![whole_subgroup(g)];
    loop {
        let prev = series.last().unwrap();
        let next = commutator_subgroup(g, prev, &whole_subgroup(g));
        if next.members() == prev.members() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_perfect(g: &Group) -> bool {
    commutator_subgroup(g, &whole_subgroup(g), &whole_subgroup(g)).is_whole()
}

pub fn is_nilpotent(g: &Group) -> bool {
    lower_central_series(g).last().unwrap().is_trivial()
}

/// Every subgroup, by closure-extension search. Order is by sorted
/// member set. Guarded by the subgroup enumeration cap.
pub fn all_subgroups(g: &Group, cfg: &Config) -> Result<Vec<Subgroup>> {
    if g.order() > cfg.subgroup_enum_cap {
        return Err(Error::SizeLimit { cap: cfg.subgroup_enum_cap, reached: g.order() });
    }
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    let triv = vec![0u32];
    seen.insert(triv.clone());
    queue.push_back(triv);
    while let Some(h) = queue.pop_front() {
        for x in g.elements() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut seed = h.clone();
            seed.push(x);
            let k = generated_subgroup(g, &seed);
            if seen.insert(k.members().to_vec()) {
                queue.push_back(k.members().to_vec());
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|members| Subgroup { parent: g.clone(), members })
        .collect())
}

pub fn maximal_subgroups(g: &Group, cfg: &Config) -> Result<Vec<Subgroup>> {
    let subs = all_subgroups(g, cfg)?;
    let proper: Vec<&Subgroup> = subs.iter().filter(|s| !s.is_whole()).collect();
    Ok(proper
        .iter()
        .filter(|s| {
            !proper.iter().any(|t| {
                t.order() > s.order() && s.members().iter().all(|&m| t.contains(m))
            })
        })
        .map(|s| (*s).clone())
        .collect())
}

/// Intersection of the maximal subgroups (the whole group when there
/// are none, i.e. for the trivial group).
pub fn frattini_subgroup(g: &Group, cfg: &Config) -> Result<Subgroup> {
    let maxes = maximal_subgroups(g, cfg)?;
    if maxes.is_empty() {
        return Ok(whole_subgroup(g));
    }
    let members: Vec<u32> =
        g.elements().filter(|&x| maxes.iter().all(|m| m.contains(x))).collect();
    Ok(Subgroup { parent: g.clone(), members })
}

pub fn normal_subgroups(g: &Group, cfg: &Config) -> Result<Vec<Subgroup>> {
    Ok(all_subgroups(g, cfg)?.into_iter().filter(Subgroup::is_normal).collect())
}
