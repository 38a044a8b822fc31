//! Finite abelian groups in invariant-factor form.
//!
//! An `AbGroup` is a divisibility chain d₁ | d₂ | … with every dᵢ ≥ 2;
//! elements are residue tuples. These house coefficient groups,
//! extension kernels and every homology/cohomology answer.

use crate::zmat::{smith_normal_form, Int, IntMat};
use crate::{Error, Result};

/// Finite abelian group `Z/d₁ ⊕ … ⊕ Z/dₖ` with `d₁ | d₂ | … | dₖ`, all ≥ 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbGroup {
    factors: Vec<u64>,
}

impl AbGroup {
    /// The trivial group.
    pub fn trivial() -> AbGroup {
        AbGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> AbGroup {
        if n <= 1 {
            AbGroup::trivial()
        } else {
            AbGroup { factors: vec![n] }
        }
    }

    /// Construct from a divisibility chain; rejects anything else.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<AbGroup> {
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Invalid(format!(
                    "invariant factors must form a divisibility chain: {} ∤ {}",
                    w[0], w[1]
                )));
            }
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::Invalid("invariant factors must be ≥ 2".into()));
        }
        Ok(AbGroup { factors })
    }

    /// Canonical form of `⊕ Z/mᵢ` for arbitrary moduli (1s drop out).
    pub fn from_moduli(moduli: &[u64]) -> AbGroup {
        // prime -> descending list of exponents
        let mut primes: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &m in moduli {
            assert!(m >= 1, "moduli must be positive");
            let mut m = m;
            let mut p = 2u64;
            while p * p <= m {
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    primes.entry(p).or_default().push(e);
                }
                p += 1;
            }
            if m > 1 {
                primes.entry(m).or_default().push(1);
            }
        }
        let depth = primes.values().map(Vec::len).max().unwrap_or(0);
        for exps in primes.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        // k-th invariant factor (largest first) = ∏ p^(k-th largest exponent)
        let mut factors: Vec<u64> = (0..depth)
            .map(|k| {
                primes
                    .iter()
                    .map(|(p, exps)| exps.get(k).map_or(1, |&e| p.pow(e)))
                    .product()
            })
            .collect();
        factors.reverse();
        AbGroup { factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn zero(&self) -> AbElt {
        AbElt { residues: vec![0; self.factors.len()] }
    }

    /// The i-th standard generator.
    pub fn generator(&self, i: usize) -> AbElt {
        let mut e = self.zero();
        e.residues[i] = 1 % self.factors[i];
        e
    }

    /// Element from integer coordinates, reduced per factor.
    pub fn elt(&self, coords: &[i64]) -> AbElt {
        assert_eq!(coords.len(), self.factors.len());
        AbElt {
            residues: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        }
    }

    /// Element from exact integer coordinates.
    pub fn elt_from_ints(&self, coords: &[Int]) -> AbElt {
        assert_eq!(coords.len(), self.factors.len());
        AbElt {
            residues: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, &d)| {
                    c.div_rem_euclid(&Int::from(d)).1.to_i64().expect("residue fits") as u64
                })
                .collect(),
        }
    }

    pub fn contains(&self, e: &AbElt) -> bool {
        e.residues.len() == self.factors.len()
            && e.residues.iter().zip(&self.factors).all(|(&r, &d)| r < d)
    }

    pub fn add(&self, a: &AbElt, b: &AbElt) -> AbElt {
        AbElt {
            residues: a
                .residues
                .iter()
                .zip(&b.residues)
                .zip(&self.factors)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &AbElt) -> AbElt {
        AbElt {
            residues: a
                .residues
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| (d - x) % d)
                .collect(),
        }
    }

    pub fn sub(&self, a: &AbElt, b: &AbElt) -> AbElt {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, n: i64, a: &AbElt) -> AbElt {
        AbElt {
            residues: a
                .residues
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| ((n.rem_euclid(d as i64) as u64) * x) % d)
                .collect(),
        }
    }

    pub fn elt_order(&self, a: &AbElt) -> u64 {
        a.residues
            .iter()
            .zip(&self.factors)
            .map(|(&x, &d)| {
                if x == 0 {
                    1
                } else {
                    d / gcd(x, d)
                }
            })
            .fold(1, lcm)
    }

    /// All elements in lexicographic residue order (first coordinate
    /// most significant). Deterministic; the first element is zero.
    pub fn elements(&self) -> impl Iterator<Item = AbElt> + '_ {
        let total = self.order();
        (0..total).map(move |idx| self.elt_at(idx))
    }

    /// The idx-th element in lexicographic order.
    pub fn elt_at(&self, idx: u128) -> AbElt {
        let mut residues = vec![0u64; self.factors.len()];
        let mut rem = idx;
        for i in (0..self.factors.len()).rev() {
            let d = self.factors[i] as u128;
            residues[i] = (rem % d) as u64;
            rem /= d;
        }
        debug_assert_eq!(rem, 0, "index out of range");
        AbElt { residues }
    }

    /// Lexicographic index of an element (inverse of `elt_at`).
    pub fn index_of(&self, e: &AbElt) -> u128 {
        let mut idx = 0u128;
        for (&r, &d) in e.residues.iter().zip(&self.factors) {
            idx = idx * d as u128 + r as u128;
        }
        idx
    }

    /// Elements annihilated by n, i.e. the n-torsion subgroup, in
    /// lexicographic order.
    pub fn n_torsion(&self, n: u64) -> Vec<AbElt> {
        self.elements()
            .filter(|e| self.scale(n as i64, e).is_zero())
            .collect()
    }

    /// The quotient `A / nA` together with the projection: each
    /// coordinate of A maps to its residue modulo gcd(dᵢ, n). gcd
    /// preserves the divisibility chain, so no reassembly is needed.
    pub fn mod_n(&self, n: u64) -> (AbGroup, impl Fn(&AbElt) -> AbElt) {
        let keep: Vec<(usize, u64)> = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, gcd(d, n)))
            .filter(|&(_, m)| m > 1)
            .collect();
        let quo = AbGroup { factors: keep.iter().map(|&(_, m)| m).collect() };
        let proj = move |e: &AbElt| AbElt {
            residues: keep.iter().map(|&(i, m)| e.residues[i] % m).collect(),
        };
        (quo, proj)
    }
}

/// Element of an `AbGroup`: one residue per invariant factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AbElt {
    residues: Vec<u64>,
}

impl AbElt {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    pub fn from_residues(residues: Vec<u64>) -> AbElt {
        AbElt { residues }
    }
}

impl std::fmt::Display for AbElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Homomorphism between finite abelian groups, given by an integer
/// matrix on the standard generators (column j = image of source
/// generator j, in target coordinates).
#[derive(Clone, Debug)]
pub struct AbMap {
    source: AbGroup,
    target: AbGroup,
    /// matrix[i][j], target row i, source column j, reduced mod target dᵢ
    matrix: Vec<Vec<u64>>,
}

impl AbMap {
    /// Checked construction: source factor dⱼ must annihilate the image
    /// of generator j.
    pub fn new(source: AbGroup, target: AbGroup, matrix: Vec<Vec<i64>>) -> Result<AbMap> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Invalid("abelian map matrix has wrong shape".into()));
        }
        let reduced: Vec<Vec<u64>> = matrix
            .iter()
            .zip(target.invariant_factors())
            .map(|(row, &d)| row.iter().map(|&v| v.rem_euclid(d as i64) as u64).collect())
            .collect();
        for j in 0..source.rank() {
            let dj = source.invariant_factors()[j];
            for (i, &di) in target.invariant_factors().iter().enumerate() {
                if (dj as u128 * reduced[i][j] as u128) % di as u128 != 0 {
                    return Err(Error::Invalid(format!(
                        "not well-defined: source factor {dj} does not annihilate image of generator {j}"
                    )));
                }
            }
        }
        Ok(AbMap { source, target, matrix: reduced })
    }

    pub fn identity(g: &AbGroup) -> AbMap {
        let n = g.rank();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j) % g.invariant_factors()[i].max(1)).collect())
            .collect();
        AbMap { source: g.clone(), target: g.clone(), matrix }
    }

    pub fn zero(source: &AbGroup, target: &AbGroup) -> AbMap {
        AbMap {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn source(&self) -> &AbGroup {
        &self.source
    }

    pub fn target(&self) -> &AbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, e: &AbElt) -> AbElt {
        debug_assert!(self.source.contains(e));
        let residues = self
            .matrix
            .iter()
            .zip(self.target.invariant_factors())
            .map(|(row, &d)| {
                row.iter()
                    .zip(e.residues())
                    .fold(0u64, |acc, (&m, &x)| (acc + (m as u128 * x as u128 % d as u128) as u64) % d)
            })
            .collect();
        AbElt { residues }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbMap) -> AbMap {
        assert_eq!(other.target, self.source, "composition mismatch");
        let matrix = (0..self.target.rank())
            .map(|i| {
                let d = self.target.invariant_factors()[i];
                (0..other.source.rank())
                    .map(|j| {
                        (0..self.source.rank()).fold(0u64, |acc, k| {
                            (acc + self.matrix[i][k] as u128 as u64 % d * (other.matrix[k][j] % d)
                                % d)
                                % d
                        })
                    })
                    .collect()
            })
            .collect();
        AbMap { source: other.source.clone(), target: self.target.clone(), matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&v| v == 0)
    }

    /// Invariant factors of the cokernel `target / im(self)`.
    pub fn cokernel(&self) -> AbGroup {
        // relations: columns of the matrix plus diag(target factors)
        let tn = self.target.rank();
        let mut cols: Vec<Vec<i64>> = Vec::new();
        for j in 0..self.source.rank() {
            cols.push((0..tn).map(|i| self.matrix[i][j] as i64).collect());
        }
        for (i, &d) in self.target.invariant_factors().iter().enumerate() {
            let mut c = vec![0i64; tn];
            c[i] = d as i64;
            cols.push(c);
        }
        let dense: Vec<Vec<i64>> = (0..tn).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let m = IntMat::from_dense(&dense);
        let divisors = smith_normal_form(&m)
            .s
            .diagonal()
            .into_iter()
            .filter_map(|d| d.to_i64())
            .filter(|&d| d > 1)
            .map(|d| d as u64)
            .collect::<Vec<_>>();
        // free part is impossible: diag(target) has full rank
        AbGroup::from_moduli(&divisors)
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Order of the kernel (|source| · |coker| / |target|).
    pub fn kernel_order(&self) -> u128 {
        self.source.order() * self.cokernel().order() / self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_order() == 1
    }

    /// Kernel elements, by direct scan. Intended for the small groups
    /// that appear as extension kernels.
    pub fn kernel_elements(&self) -> Vec<AbElt> {
        self.source.elements().filter(|e| self.apply(e).is_zero()).collect()
    }
}

/// All homomorphisms `source → target`, in a deterministic order:
/// generator j may map to any element annihilated by its order.
pub fn enumerate_homs(source: &AbGroup, target: &AbGroup) -> Vec<AbMap> {
    let choices: Vec<Vec<AbElt>> = source
        .invariant_factors()
        .iter()
        .map(|&d| target.n_torsion(d))
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let matrix = (0..target.rank())
            .map(|i| (0..source.rank()).map(|j| choices[j][pick[j]].residues()[i]).collect())
            .collect();
        out.push(AbMap { source: source.clone(), target: target.clone(), matrix });
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}
