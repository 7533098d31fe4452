//! Definition-level reference implementations.
//!
//! Everything here works straight from the definitions on raw cell values:
//! pairwise scans, explicit cross products, power-set sweeps. Nothing calls
//! into the partition, context, or Galois code, so agreement between the two
//! sides is meaningful. None of this is meant to be fast.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::fd_discovery::FunctionalDependency;
use crate::mvd::{AttrPartition, ClassFamily, GeneralizedMvd};
use crate::relation::{AttrSet, CellKey, Relation};

pub const MAX_CLASS_TUPLES: usize = 12;
pub const MAX_PARTITION_ATTRIBUTES: usize = 6;

type Row<'a> = Vec<CellKey<'a>>;

fn row_on<'a>(rel: &'a Relation, t: usize, attrs: &[usize]) -> Row<'a> {
    attrs.iter().map(|&a| rel.cell_key(t, a)).collect()
}

/// Every pair of tuples agreeing on all of `xs` agrees on all of `ys`.
pub fn oracle_fd(rel: &Relation, xs: &AttrSet, ys: &AttrSet) -> bool {
    let n = rel.n_tuples();
    for i in 0..n {
        for j in i + 1..n {
            let agree = |a: usize| rel.cell_key(i, a) == rel.cell_key(j, a);
            if xs.iter().all(agree) && !ys.iter().all(agree) {
                return false;
            }
        }
    }
    true
}

/// Minimal non-trivial FDs by checking every candidate and every proper
/// subset of its left-hand side. Sorted like the discovery output.
pub fn oracle_minimal_fds(rel: &Relation, max_lhs: usize) -> Vec<FunctionalDependency> {
    let m = rel.n_attrs();
    assert!(
        m <= 16,
        "oracle sweep is exponential in the attribute count"
    );
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        let lhs: Vec<usize> = (0..m).filter(|a| mask >> a & 1 == 1).collect();
        if lhs.len() > max_lhs {
            continue;
        }
        for rhs in (0..m).filter(|a| mask >> a & 1 == 0) {
            let rhs_set = AttrSet::single(rhs);
            if !oracle_fd(rel, &AttrSet::new(lhs.iter().copied()), &rhs_set) {
                continue;
            }
            // Every proper subset of the lhs, not just the immediate ones.
            let minimal = (0..mask).filter(|s| s & mask == *s).all(|sub| {
                let sub_set: AttrSet = (0..m).filter(|a| sub >> a & 1 == 1).collect();
                !oracle_fd(rel, &sub_set, &rhs_set)
            });
            if minimal {
                out.push(FunctionalDependency::new(
                    AttrSet::new(lhs.iter().copied()),
                    rhs,
                ));
            }
        }
    }
    out.sort_by(|a, b| {
        (a.lhs.len(), a.lhs.as_slice(), a.rhs).cmp(&(b.lhs.len(), b.lhs.as_slice(), b.rhs))
    });
    out
}

/// Explicit cross product of per-block row sets, reassembled in attribute order.
fn cross_product<'a>(
    blocks: &[Vec<usize>],
    parts: &[BTreeSet<Row<'a>>],
    m: usize,
) -> BTreeSet<Row<'a>> {
    let parts: Vec<Vec<&Row<'a>>> = parts.iter().map(|p| p.iter().collect()).collect();
    if parts.iter().any(Vec::is_empty) {
        return BTreeSet::new();
    }
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; parts.len()];
    loop {
        let mut row: Vec<Option<CellKey<'a>>> = vec![None; m];
        for (b, block) in blocks.iter().enumerate() {
            for (k, &a) in block.iter().enumerate() {
                row[a] = Some(parts[b][idx[b]][k]);
            }
        }
        out.insert(row.into_iter().flatten().collect());
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < parts[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Blocks index into `attrs`-ordered rows; used for matching over a subset of
/// attributes as well as over all of them.
fn class_matches(rel: &Relation, blocks: &[Vec<usize>], attrs: &[usize], class: &[usize]) -> bool {
    let rows: BTreeSet<Row<'_>> = class.iter().map(|&t| row_on(rel, t, attrs)).collect();
    let local_blocks: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|a| attrs.iter().position(|x| x == a).unwrap())
                .collect()
        })
        .collect();
    let parts: Vec<BTreeSet<Row<'_>>> = blocks
        .iter()
        .map(|b| class.iter().map(|&t| row_on(rel, t, b)).collect())
        .collect();
    cross_product(&local_blocks, &parts, attrs.len()) == rows
}

/// Direct MVD test: within each `X`-group, the rows outside `X` equal the
/// cross product of their projections on the right-hand blocks.
pub fn oracle_mvd(rel: &Relation, d: &GeneralizedMvd) -> bool {
    let lhs: Vec<usize> = d.lhs().iter().collect();
    let blocks: Vec<Vec<usize>> = d.rhs_blocks().iter().map(|b| b.iter().collect()).collect();
    let mut rest: Vec<usize> = blocks.iter().flatten().copied().collect();
    rest.sort_unstable();
    if rest.is_empty() {
        return true;
    }
    let mut groups: HashMap<Row<'_>, Vec<usize>> = HashMap::new();
    for t in 0..rel.n_tuples() {
        groups.entry(row_on(rel, t, &lhs)).or_default().push(t);
    }
    groups
        .values()
        .all(|group| class_matches(rel, &blocks, &rest, group))
}

/// Power-set sweep for the maximal classes matched by `p`.
pub fn oracle_maximal_classes(rel: &Relation, p: &AttrPartition) -> Result<ClassFamily> {
    let n = rel.n_tuples();
    if n > MAX_CLASS_TUPLES {
        return Err(Error::capacity("tuple count", n, MAX_CLASS_TUPLES));
    }
    let blocks = p.blocks();
    let all: Vec<usize> = (0..rel.n_attrs()).collect();
    let matched: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|mask| (0..n).filter(|t| mask >> t & 1 == 1).collect::<Vec<_>>())
        .filter(|c| class_matches(rel, &blocks, &all, c))
        .collect();
    let is_proper_subset =
        |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|t| b.contains(t));
    let maximal: Vec<Vec<usize>> = matched
        .iter()
        .filter(|c| !matched.iter().any(|d| is_proper_subset(c, d)))
        .cloned()
        .collect();
    ClassFamily::new(&maximal, n)
}

/// All set partitions of `items`, as lists of blocks.
fn all_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for sub in all_partitions(rest) {
        for i in 0..sub.len() {
            let mut with = sub.clone();
            with[i].insert(0, first);
            out.push(with);
        }
        let mut alone = sub;
        alone.insert(0, vec![first]);
        out.push(alone);
    }
    out
}

fn same_block(blocks: &[Vec<usize>], a: usize, b: usize) -> bool {
    blocks.iter().any(|bl| bl.contains(&a) && bl.contains(&b))
}

/// `p` refines `q` iff every pair together in `p` is together in `q`.
fn finer_or_equal(p: &[Vec<usize>], q: &[Vec<usize>], m: usize) -> bool {
    (0..m).all(|a| (0..m).all(|b| !same_block(p, a, b) || same_block(q, a, b)))
}

/// Bell-number sweep for the finest partition matching every class of `s`.
/// Fails if the refinement-minimal matching partitions are not unique.
pub fn oracle_finest_matching(rel: &Relation, s: &ClassFamily) -> Result<AttrPartition> {
    let m = rel.n_attrs();
    if m > MAX_PARTITION_ATTRIBUTES {
        return Err(Error::capacity(
            "attribute count",
            m,
            MAX_PARTITION_ATTRIBUTES,
        ));
    }
    let attrs: Vec<usize> = (0..m).collect();
    let matching: Vec<Vec<Vec<usize>>> = all_partitions(&attrs)
        .into_iter()
        .filter(|p| s.classes().all(|c| class_matches(rel, p, &attrs, c)))
        .collect();
    let minimal: Vec<&Vec<Vec<usize>>> = matching
        .iter()
        .filter(|p| {
            !matching
                .iter()
                .any(|q| finer_or_equal(q, p, m) && !finer_or_equal(p, q, m))
        })
        .collect();
    match minimal.as_slice() {
        [only] => AttrPartition::from_blocks(only, m),
        _ => Err(Error::InvariantViolation(format!(
            "{} incomparable minimal matching partitions",
            minimal.len()
        ))),
    }
}

/// Meet closure by taking the meet of every non-empty subset of generators.
pub fn oracle_meet_closure(gens: &[AttrPartition]) -> BTreeSet<AttrPartition> {
    assert!(gens.len() <= 20, "power-set sweep over too many generators");
    let Some(m) = gens.first().map(AttrPartition::n_attrs) else {
        return BTreeSet::new();
    };
    let blocks: Vec<Vec<Vec<usize>>> = gens.iter().map(AttrPartition::blocks).collect();
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << gens.len() {
        let chosen: Vec<&Vec<Vec<usize>>> = (0..gens.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &blocks[i])
            .collect();
        // a ~ b iff together in every chosen generator.
        let mut result: Vec<Vec<usize>> = Vec::new();
        let mut placed = HashSet::new();
        for a in 0..m {
            if !placed.insert(a) {
                continue;
            }
            let mut block = vec![a];
            for b in a + 1..m {
                if chosen.iter().all(|g| same_block(g, a, b)) {
                    placed.insert(b);
                    block.push(b);
                }
            }
            result.push(block);
        }
        out.insert(AttrPartition::from_blocks(&result, m).expect("valid partition"));
    }
    out
}
