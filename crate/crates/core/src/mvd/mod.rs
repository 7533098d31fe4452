//! Multivalued dependencies through a Galois connection between attribute
//! partitions and families of tuple classes.
//!
//! An attribute partition `P = <P1|...|Pk>` *matches* a set of tuples `C`
//! when `C` equals the cross product of its projections on the blocks.
//! `phi(P)` collects the maximal classes matched by `P`; `psi(S)` returns the
//! finest partition matching every class of `S`. `gamma = psi . phi` and
//! `gamma_prime = phi . psi` are the derived closure operators, and a
//! generalized MVD `X ->> Y1|...|Ym` holds iff `gamma` agrees on
//! `<X1|...|Xn|Y>` and `<X1|...|Xn|Y1|...|Ym>`.
//!
//! Orientation: `gamma(p)` always refines `p`. In the refinement order the
//! operator is therefore reductive; in the reverse order it is a closure. The
//! all-singletons partition is always a fixed point, the single block only
//! when the whole relation admits no cross-product factorization.

mod attr_partition;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub use attr_partition::{parse_blocks, AttrPartition};

use crate::error::{Error, Result};
use crate::relation::{AttrSet, Relation};

/// Default cap on the tuple count for the exponential class enumeration.
pub const DEFAULT_MAX_TUPLES: usize = 16;
/// Classes are bitmasks internally; nothing above this can be enumerated.
pub const HARD_MAX_TUPLES: usize = 63;

/// A family of tuple classes, each a sorted non-empty set of tuple indices.
///
/// Families produced by [`Galois::phi`] are antichains covering every tuple;
/// families built by callers only need valid, non-empty classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassFamily {
    classes: BTreeSet<Vec<usize>>,
}

impl ClassFamily {
    pub fn new<C: AsRef<[usize]>>(classes: &[C], n_tuples: usize) -> Result<Self> {
        let mut out = BTreeSet::new();
        for c in classes {
            let mut c = c.as_ref().to_vec();
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                return Err(Error::contract("empty tuple class"));
            }
            if c[c.len() - 1] >= n_tuples {
                return Err(Error::contract(format!(
                    "tuple index {} out of range for {n_tuples} tuples",
                    c[c.len() - 1]
                )));
            }
            out.insert(c);
        }
        Ok(ClassFamily { classes: out })
    }

    fn from_masks(masks: &[u64]) -> Self {
        ClassFamily {
            classes: masks
                .iter()
                .map(|&m| (0..64).filter(|t| m >> t & 1 == 1).collect())
                .collect(),
        }
    }

    /// Every tuple in a class of its own.
    pub fn singletons(n_tuples: usize) -> Self {
        ClassFamily {
            classes: (0..n_tuples).map(|t| vec![t]).collect(),
        }
    }

    pub fn classes(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, class: &[usize]) -> bool {
        self.classes.contains(class)
    }

    /// No class is a proper subset of another.
    pub fn is_antichain(&self) -> bool {
        self.classes.iter().all(|a| {
            self.classes
                .iter()
                .all(|b| a == b || !a.iter().all(|t| b.binary_search(t).is_ok()))
        })
    }

    /// Every tuple `0..n` appears in some class.
    pub fn covers(&self, n_tuples: usize) -> bool {
        let mut seen = vec![false; n_tuples];
        for c in &self.classes {
            for &t in c {
                seen[t] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether `class` is contained in some member of the family.
    pub fn absorbs(&self, class: &[usize]) -> bool {
        self.classes
            .iter()
            .any(|c| class.iter().all(|t| c.binary_search(t).is_ok()))
    }
}

impl fmt::Debug for ClassFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.classes).finish()
    }
}

/// `X ->> Y1 | ... | Ym` where the `Yi` partition `A \ X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedMvd {
    lhs: AttrSet,
    rhs_blocks: Vec<AttrSet>,
}

impl GeneralizedMvd {
    /// Validates that the right-hand blocks are non-empty, pairwise disjoint,
    /// and together cover exactly the attributes outside `lhs`. When `lhs` is
    /// every attribute the right-hand side is empty.
    pub fn new(lhs: AttrSet, rhs_blocks: Vec<AttrSet>, n_attrs: usize) -> Result<Self> {
        if lhs.bound() > n_attrs {
            return Err(Error::contract(format!("lhs {lhs} out of range")));
        }
        let mut seen = vec![false; n_attrs];
        for a in lhs.iter() {
            seen[a] = true;
        }
        for block in &rhs_blocks {
            if block.is_empty() {
                return Err(Error::contract("empty rhs block"));
            }
            for a in block.iter() {
                if a >= n_attrs || seen[a] {
                    return Err(Error::contract(format!(
                        "attribute {a} out of range, in the lhs, or in two rhs blocks"
                    )));
                }
                seen[a] = true;
            }
        }
        if let Some(a) = seen.iter().position(|s| !s) {
            return Err(Error::contract(format!(
                "attribute {a} is neither in the lhs nor in any rhs block"
            )));
        }
        let mut rhs_blocks = rhs_blocks;
        rhs_blocks.sort();
        Ok(GeneralizedMvd { lhs, rhs_blocks })
    }

    pub fn lhs(&self) -> &AttrSet {
        &self.lhs
    }

    pub fn rhs_blocks(&self) -> &[AttrSet] {
        &self.rhs_blocks
    }

    /// `<X1|...|Xn|Y>` with `Y` the union of the right-hand blocks.
    pub fn premise_partition(&self, n_attrs: usize) -> AttrPartition {
        AttrPartition::from_keys((0..n_attrs).map(
            |a| {
                if self.lhs.contains(a) {
                    a
                } else {
                    n_attrs
                }
            },
        ))
    }

    /// `<X1|...|Xn|Y1|...|Ym>`.
    pub fn split_partition(&self, n_attrs: usize) -> AttrPartition {
        AttrPartition::from_keys((0..n_attrs).map(|a| {
            if self.lhs.contains(a) {
                a
            } else {
                let b = self.rhs_blocks.iter().position(|b| b.contains(a)).unwrap();
                n_attrs + b
            }
        }))
    }

    /// Every well-formed generalized MVD over `n_attrs` attributes whose
    /// left-hand side has at most `max_lhs` attributes.
    pub fn enumerate(n_attrs: usize, max_lhs: usize) -> Vec<GeneralizedMvd> {
        let mut out = Vec::new();
        for mask in 0u64..1 << n_attrs {
            if mask.count_ones() as usize > max_lhs {
                continue;
            }
            let lhs = AttrSet::from_mask(mask);
            let rest: Vec<usize> = (0..n_attrs).filter(|&a| !lhs.contains(a)).collect();
            for p in AttrPartition::enumerate(rest.len()) {
                let blocks = p
                    .blocks()
                    .into_iter()
                    .map(|b| b.into_iter().map(|i| rest[i]).collect())
                    .collect();
                out.push(GeneralizedMvd::new(lhs.clone(), blocks, n_attrs).expect("well formed"));
            }
        }
        out
    }

    pub fn display(&self, rel: &Relation) -> String {
        let rhs: Vec<String> = self
            .rhs_blocks
            .iter()
            .map(|b| rel.names_of(b).join(","))
            .collect();
        format!(
            "{} ->> {}",
            rel.names_of(&self.lhs).join(","),
            rhs.join("|")
        )
    }
}

/// Whether `p` matches the tuples `c`: the distinct rows of `c` equal the
/// cross product of their projections on the blocks of `p`.
pub fn matches(rel: &Relation, p: &AttrPartition, c: &[usize]) -> Result<bool> {
    if c.is_empty() {
        return Err(Error::contract("matches needs a non-empty class"));
    }
    if p.n_attrs() != rel.n_attrs() {
        return Err(Error::contract(
            "partition does not cover the relation's attributes",
        ));
    }
    if let Some(&t) = c.iter().find(|&&t| t >= rel.n_tuples()) {
        return Err(Error::contract(format!("tuple index {t} out of range")));
    }
    let blocks = p.blocks();
    let rows: HashSet<Vec<u32>> = c
        .iter()
        .map(|&t| (0..rel.n_attrs()).map(|a| rel.code(t, a)).collect())
        .collect();
    let mut product: usize = 1;
    for b in &blocks {
        let proj: HashSet<Vec<u32>> = c
            .iter()
            .map(|&t| b.iter().map(|&a| rel.code(t, a)).collect())
            .collect();
        product = product.saturating_mul(proj.len());
        if product > rows.len() {
            return Ok(false);
        }
    }
    // Rows always embed into the product, so equal sizes mean equal sets.
    Ok(product == rows.len())
}

/// The Galois connection on one relation, with the class-enumeration cap
/// checked up front.
pub struct Galois<'r> {
    rel: &'r Relation,
}

impl<'r> Galois<'r> {
    /// Fails with a capacity error when the relation has more than
    /// `max_tuples` tuples (itself capped at [`HARD_MAX_TUPLES`]).
    pub fn new(rel: &'r Relation, max_tuples: usize) -> Result<Self> {
        let cap = max_tuples.min(HARD_MAX_TUPLES);
        if rel.n_tuples() > cap {
            return Err(Error::capacity("tuple count", rel.n_tuples(), cap));
        }
        Ok(Galois { rel })
    }

    pub fn relation(&self) -> &'r Relation {
        self.rel
    }

    /// For each block of `p` (and for the full row), a per-tuple bit whose
    /// position identifies the tuple's projection on that block.
    fn projection_bits(&self, blocks: &[Vec<usize>]) -> (Vec<u64>, Vec<Vec<u64>>) {
        let n = self.rel.n_tuples();
        let ids = |attrs: &[usize]| -> Vec<u64> {
            let mut dict: HashMap<Vec<u32>, u32> = HashMap::new();
            (0..n)
                .map(|t| {
                    let key: Vec<u32> = attrs.iter().map(|&a| self.rel.code(t, a)).collect();
                    let next = dict.len() as u32;
                    1u64 << *dict.entry(key).or_insert(next)
                })
                .collect()
        };
        let all: Vec<usize> = (0..self.rel.n_attrs()).collect();
        (ids(&all), blocks.iter().map(|b| ids(b)).collect())
    }

    /// All maximal tuple classes matched by `p`.
    ///
    /// Subsets are visited by decreasing size; a matched subset not inside an
    /// already found class is maximal, since any matched proper superset
    /// would have been visited (and recorded or absorbed) first.
    pub fn phi(&self, p: &AttrPartition) -> ClassFamily {
        assert_eq!(
            p.n_attrs(),
            self.rel.n_attrs(),
            "partition over wrong attribute set"
        );
        let n = self.rel.n_tuples();
        let blocks = p.blocks();
        let (row_bits, block_bits) = self.projection_bits(&blocks);
        let matched = |mask: u64| -> bool {
            let mut rows = 0u64;
            let mut projs = vec![0u64; block_bits.len()];
            let mut m = mask;
            while m != 0 {
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                rows |= row_bits[t];
                for (acc, bits) in projs.iter_mut().zip(&block_bits) {
                    *acc |= bits[t];
                }
            }
            let target = rows.count_ones() as u64;
            let mut product = 1u64;
            for acc in projs {
                product *= acc.count_ones() as u64;
                if product > target {
                    return false;
                }
            }
            product == target
        };

        let mut found: Vec<u64> = Vec::new();
        for k in (1..=n).rev() {
            let limit = 1u64 << n;
            let mut mask = (1u64 << k) - 1;
            while mask < limit {
                if !found.iter().any(|f| mask & !f == 0) && matched(mask) {
                    found.push(mask);
                }
                // Gosper's hack: next mask with the same popcount.
                let low = mask & mask.wrapping_neg();
                let ripple = mask + low;
                mask = (((ripple ^ mask) >> 2) / low) | ripple;
            }
        }
        ClassFamily::from_masks(&found)
    }

    /// The finest partition matching every class of `s`.
    pub fn psi(&self, s: &ClassFamily) -> AttrPartition {
        psi(self.rel, s)
    }

    pub fn gamma(&self, p: &AttrPartition) -> AttrPartition {
        self.psi(&self.phi(p))
    }

    pub fn gamma_prime(&self, s: &ClassFamily) -> ClassFamily {
        self.phi(&self.psi(s))
    }

    pub fn mvd_holds(&self, d: &GeneralizedMvd) -> bool {
        let m = self.rel.n_attrs();
        if d.rhs_blocks.len() <= 1 {
            return true;
        }
        self.gamma(&d.premise_partition(m)) == self.gamma(&d.split_partition(m))
    }
}

/// The finest partition matching every class of `s`; the all-singletons
/// partition for an empty family.
///
/// Matching partitions of a class are closed under meets and under
/// coarsening, so each class has a finest matching partition and the answer
/// is the join of those.
pub fn psi(rel: &Relation, s: &ClassFamily) -> AttrPartition {
    let m = rel.n_attrs();
    s.classes()
        .map(|c| finest_factorization(rel, c))
        .fold(AttrPartition::discrete(m), |acc, f| acc.join(&f))
}

/// Finest cross-product factorization of the rows of `class`.
///
/// Attributes are added one at a time. Adding attribute `a` to a factored
/// projection can only merge `a` with some of the existing factors; the
/// merged set is found by dropping every factor whose removal still leaves
/// `{a} ∪ merged` independent of the rest.
fn finest_factorization(rel: &Relation, class: &[usize]) -> AttrPartition {
    let m = rel.n_attrs();
    let distinct = |attrs: &[usize]| -> usize {
        class
            .iter()
            .map(|&t| attrs.iter().map(|&a| rel.code(t, a)).collect::<Vec<u32>>())
            .collect::<HashSet<_>>()
            .len()
    };

    let mut factors: Vec<Vec<usize>> = Vec::new();
    for a in 0..m {
        let mut scope: Vec<usize> = factors.iter().flatten().copied().collect();
        scope.push(a);
        let total = distinct(&scope);
        let mut merged = vec![true; factors.len()];
        for f in 0..factors.len() {
            merged[f] = false;
            let mut joined = vec![a];
            let mut rest = Vec::new();
            for (g, factor) in factors.iter().enumerate() {
                if merged[g] {
                    joined.extend(factor);
                } else {
                    rest.extend(factor);
                }
            }
            if distinct(&joined) * distinct(&rest) != total {
                merged[f] = true;
            }
        }
        let mut new_factor = vec![a];
        let mut kept = Vec::new();
        for (factor, absorbed) in factors.into_iter().zip(merged) {
            if absorbed {
                new_factor.extend(factor);
            } else {
                kept.push(factor);
            }
        }
        kept.push(new_factor);
        factors = kept;
    }
    let mut owner = vec![0usize; m];
    for (i, f) in factors.iter().enumerate() {
        for &a in f {
            owner[a] = i;
        }
    }
    AttrPartition::from_keys(owner)
}

pub fn phi(rel: &Relation, p: &AttrPartition) -> Result<ClassFamily> {
    Ok(Galois::new(rel, DEFAULT_MAX_TUPLES)?.phi(p))
}

pub fn gamma(rel: &Relation, p: &AttrPartition) -> Result<AttrPartition> {
    Ok(Galois::new(rel, DEFAULT_MAX_TUPLES)?.gamma(p))
}

pub fn gamma_prime(rel: &Relation, s: &ClassFamily) -> Result<ClassFamily> {
    Ok(Galois::new(rel, DEFAULT_MAX_TUPLES)?.gamma_prime(s))
}

pub fn mvd_holds(rel: &Relation, d: &GeneralizedMvd) -> Result<bool> {
    Ok(Galois::new(rel, DEFAULT_MAX_TUPLES)?.mvd_holds(d))
}
