//! The attribute-partition lattice built from pairwise agreement vectors.
//!
//! Every pair of distinct tuples yields an agreement vector; the attributes
//! on which the pair disagrees are lumped into one block and the rest stay
//! singletons. Closing that set of partitions under meet gives the lattice
//! associated with degenerated MVDs. The Γ-closed partitions form the MVD
//! lattice, which sits inside it.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::mvd::{AttrPartition, Galois, GeneralizedMvd};
use crate::relation::Relation;

/// Caps the Bell-number sweep in [`mvd_lattice`].
pub const MAX_LATTICE_ATTRIBUTES: usize = 6;

/// One agreement flag per attribute: `true` where two tuples agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgreementVector(pub Vec<bool>);

impl AgreementVector {
    pub fn from_bits(bits: &str) -> Self {
        AgreementVector(bits.chars().map(|c| c == '1').collect())
    }
}

/// A meet-closed set of attribute partitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionLattice {
    elements: BTreeSet<AttrPartition>,
}

impl PartitionLattice {
    pub fn elements(&self) -> impl Iterator<Item = &AttrPartition> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &AttrPartition) -> bool {
        self.elements.contains(p)
    }

    pub fn is_meet_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&a.meet(b))))
    }

    /// One partition per line in `a|b,c|d` form.
    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.elements
            .iter()
            .map(|p| p.display_with(names) + "\n")
            .collect()
    }

    /// Each element as a list of blocks, each block a list of names.
    pub fn to_named<'a>(&self, names: &'a [String]) -> Vec<NamedPartition<'a>> {
        self.elements
            .iter()
            .map(|p| {
                p.blocks()
                    .into_iter()
                    .map(|b| b.into_iter().map(|a| names[a].as_str()).collect())
                    .collect()
            })
            .collect()
    }
}

pub type NamedPartition<'a> = Vec<Vec<&'a str>>;

impl FromIterator<AttrPartition> for PartitionLattice {
    fn from_iter<I: IntoIterator<Item = AttrPartition>>(iter: I) -> Self {
        PartitionLattice {
            elements: iter.into_iter().collect(),
        }
    }
}

/// The distinct agreement vectors over all unordered pairs of tuples.
pub fn bin_vectors(rel: &Relation) -> BTreeSet<AgreementVector> {
    let n = rel.n_tuples();
    let cols: Vec<&[u32]> = (0..rel.n_attrs()).map(|a| rel.column(a)).collect();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            out.insert(AgreementVector(cols.iter().map(|c| c[i] == c[j]).collect()));
        }
    }
    out
}

/// Lumps the `0` positions into one block; each `1` position is a singleton.
pub fn vector_to_partition(t: &AgreementVector, n_attrs: usize) -> Result<AttrPartition> {
    if t.0.len() != n_attrs {
        return Err(Error::contract(format!(
            "agreement vector of length {} for {n_attrs} attributes",
            t.0.len()
        )));
    }
    Ok(AttrPartition::from_keys(
        t.0.iter()
            .enumerate()
            .map(|(a, &agree)| if agree { a } else { n_attrs }),
    ))
}

/// Smallest meet-closed superset of `parts`, by worklist fixpoint.
pub fn meet_closure(parts: impl IntoIterator<Item = AttrPartition>) -> PartitionLattice {
    let mut elements: BTreeSet<AttrPartition> = BTreeSet::new();
    let mut queue: VecDeque<AttrPartition> = VecDeque::new();
    for p in parts {
        if elements.insert(p.clone()) {
            queue.push_back(p);
        }
    }
    while let Some(p) = queue.pop_front() {
        let fresh: Vec<AttrPartition> = elements
            .iter()
            .map(|q| p.meet(q))
            .filter(|m| !elements.contains(m))
            .collect();
        for m in fresh {
            if elements.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    PartitionLattice { elements }
}

/// Meet closure of the partitions of all agreement vectors.
pub fn dmvd_lattice(rel: &Relation) -> PartitionLattice {
    let m = rel.n_attrs();
    meet_closure(
        bin_vectors(rel)
            .iter()
            .map(|t| vector_to_partition(t, m).expect("vector length matches")),
    )
}

/// All Γ-closed attribute partitions, by sweeping every partition of `A`.
pub fn mvd_lattice(rel: &Relation, max_tuples: usize) -> Result<PartitionLattice> {
    if rel.n_attrs() > MAX_LATTICE_ATTRIBUTES {
        return Err(Error::capacity(
            "attribute count",
            rel.n_attrs(),
            MAX_LATTICE_ATTRIBUTES,
        ));
    }
    let g = Galois::new(rel, max_tuples)?;
    Ok(mvd_lattice_with(&g))
}

pub fn mvd_lattice_with(g: &Galois<'_>) -> PartitionLattice {
    AttrPartition::enumerate(g.relation().n_attrs())
        .into_iter()
        .filter(|p| g.gamma(p) == *p)
        .collect()
}

/// `X ->> Y1|...|Ym` in the degenerated sense: any two tuples agreeing on `X`
/// disagree inside at most one right-hand block.
pub fn dmvd_holds(rel: &Relation, d: &GeneralizedMvd) -> bool {
    let n = rel.n_tuples();
    let lhs: Vec<&[u32]> = d.lhs().iter().map(|a| rel.column(a)).collect();
    let blocks: Vec<Vec<&[u32]>> = d
        .rhs_blocks()
        .iter()
        .map(|b| b.iter().map(|a| rel.column(a)).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if !lhs.iter().all(|c| c[i] == c[j]) {
                continue;
            }
            let differing = blocks
                .iter()
                .filter(|b| b.iter().any(|c| c[i] != c[j]))
                .count();
            if differing > 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::AttrSet;

    fn parts(text: &[&str], names: &[&str]) -> Vec<AttrPartition> {
        let rel = Relation::from_str_rows(names, &[]).unwrap();
        text.iter()
            .map(|t| AttrPartition::parse(t, &rel).unwrap())
            .collect()
    }

    #[test]
    fn bin_vector_examples() {
        let r = Relation::from_str_rows(&["a", "b"], &[&["1", "2"], &["1", "3"]]).unwrap();
        assert_eq!(
            bin_vectors(&r).into_iter().collect::<Vec<_>>(),
            vec![AgreementVector::from_bits("10")]
        );
        let one = Relation::from_str_rows(&["a"], &[&["1"]]).unwrap();
        assert!(bin_vectors(&one).is_empty());
        let same = Relation::from_str_rows(&["a", "b"], &[&["1", "1"], &["1", "1"]]).unwrap();
        assert_eq!(
            bin_vectors(&same).into_iter().collect::<Vec<_>>(),
            vec![AgreementVector::from_bits("11")]
        );
    }

    #[test]
    fn vector_to_partition_examples() {
        let names = ["a", "b", "c", "d", "e"];
        let p = vector_to_partition(&AgreementVector::from_bits("11001"), 5).unwrap();
        assert_eq!(p.display_with(&names), "a|b|c,d|e");
        assert_eq!(
            vector_to_partition(&AgreementVector::from_bits("11111"), 5).unwrap(),
            AttrPartition::discrete(5)
        );
        assert_eq!(
            vector_to_partition(&AgreementVector::from_bits("00000"), 5).unwrap(),
            AttrPartition::single_block(5)
        );
        assert!(vector_to_partition(&AgreementVector::from_bits("101"), 5).is_err());
    }

    #[test]
    fn meet_closure_examples() {
        let names = ["a", "b", "c", "d", "e"];
        let gens = parts(&["a|b|c,d|e", "a,b|c|d|e"], &names);
        let lat = meet_closure(gens.clone());
        assert_eq!(lat.len(), 3);
        assert!(lat.contains(&AttrPartition::discrete(5)));
        assert!(lat.is_meet_closed());

        let single = meet_closure(gens[..1].to_vec());
        assert_eq!(single.len(), 1);
        assert!(meet_closure(Vec::new()).is_empty());
    }

    #[test]
    fn dmvd_lattice_examples() {
        let one = Relation::from_str_rows(&["a", "b"], &[&["1", "2"]]).unwrap();
        assert!(dmvd_lattice(&one).is_empty());
        let r = Relation::from_str_rows(&["a", "b"], &[&["1", "2"], &["1", "3"]]).unwrap();
        let lat = dmvd_lattice(&r);
        assert_eq!(
            lat.elements().cloned().collect::<Vec<_>>(),
            vec![AttrPartition::discrete(2)]
        );
    }

    #[test]
    fn mvd_lattice_examples() {
        let grid = Relation::from_str_rows(
            &["a", "b"],
            &[&["1", "1"], &["1", "2"], &["2", "1"], &["2", "2"]],
        )
        .unwrap();
        let lat = mvd_lattice(&grid, 16).unwrap();
        assert!(lat.contains(&AttrPartition::discrete(2)));
        assert!(!lat.contains(&AttrPartition::single_block(2)));

        let diag = Relation::from_str_rows(&["a", "b"], &[&["1", "1"], &["2", "2"]]).unwrap();
        let lat = mvd_lattice(&diag, 16).unwrap();
        assert!(lat.contains(&AttrPartition::discrete(2)));
        assert!(lat.contains(&AttrPartition::single_block(2)));
    }

    #[test]
    fn mvd_lattice_caps() {
        let names: Vec<String> = (0..7).map(|i| format!("c{i}")).collect();
        let r = Relation::new(names, vec![], Default::default()).unwrap();
        assert!(matches!(mvd_lattice(&r, 16), Err(Error::Capacity { .. })));
    }

    #[test]
    fn dmvd_examples() {
        let d = GeneralizedMvd::new(
            AttrSet::single(0),
            vec![AttrSet::single(1), AttrSet::single(2)],
            3,
        )
        .unwrap();
        let ok = Relation::from_str_rows(&["A", "B", "C"], &[&["1", "1", "1"], &["1", "1", "2"]])
            .unwrap();
        assert!(dmvd_holds(&ok, &d));
        let bad = Relation::from_str_rows(&["A", "B", "C"], &[&["1", "1", "1"], &["1", "2", "2"]])
            .unwrap();
        assert!(!dmvd_holds(&bad, &d));
        let one = GeneralizedMvd::new(AttrSet::single(0), vec![AttrSet::new([1, 2])], 3).unwrap();
        assert!(dmvd_holds(&bad, &one));
    }
}
