//! Partitions of the tuple set and the partition pattern structure.
//!
//! Each attribute `a` is described by `delta(a)`, the partition of tuples
//! induced by equality on `a`; a set of attributes is described by the meet of
//! its members' partitions. `X -> Y` holds iff `X` and `X ∪ Y` induce the same
//! partition.

use std::fmt;

use crate::error::{Error, Result};
use crate::labels;
use crate::relation::{AttrSet, Relation};

/// A partition of tuple indices `0..n`, held in canonical label form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TuplePartition {
    labels: Vec<u32>,
    n_blocks: usize,
}

impl TuplePartition {
    /// Builds a partition from arbitrary block keys, one per tuple.
    pub fn from_keys<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let (labels, n_blocks) = labels::canonical(keys);
        TuplePartition { labels, n_blocks }
    }

    /// Builds a partition from explicit blocks, which must cover `0..n` disjointly.
    pub fn from_blocks(blocks: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::contract("empty block in tuple partition"));
            }
            for &t in block {
                if t >= n || owner[t] != usize::MAX {
                    return Err(Error::contract(format!(
                        "tuple {t} out of range or listed twice"
                    )));
                }
                owner[t] = b;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::contract("blocks do not cover every tuple"));
        }
        Ok(Self::from_keys(owner))
    }

    /// The top element: one block holding every tuple.
    pub fn single_block(n: usize) -> Self {
        TuplePartition {
            labels: vec![0; n],
            n_blocks: usize::from(n > 0),
        }
    }

    /// The bottom element: every tuple in its own block.
    pub fn singletons(n: usize) -> Self {
        TuplePartition {
            labels: (0..n as u32).collect(),
            n_blocks: n,
        }
    }

    /// Number of tuples partitioned.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        labels::blocks(&self.labels, self.n_blocks)
    }
}

impl fmt::Debug for TuplePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.blocks()).finish()
    }
}

fn same_range(p: &TuplePartition, q: &TuplePartition) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::contract(format!(
            "partitions over {} and {} tuples",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// `delta(a)`: tuples share a block iff they agree on `a`.
pub fn delta(rel: &Relation, a: usize) -> TuplePartition {
    TuplePartition::from_keys(rel.column(a).iter().copied())
}

/// Partition intersection: the blocks are the non-empty pairwise
/// intersections of blocks of `p` and `q`.
pub fn meet(p: &TuplePartition, q: &TuplePartition) -> Result<TuplePartition> {
    same_range(p, q)?;
    Ok(TuplePartition::from_keys(
        p.labels.iter().zip(&q.labels).map(|(a, b)| (*a, *b)),
    ))
}

/// `{X}^□`: the meet of `delta(a)` over `a ∈ xs`; the single block for `∅`.
pub fn partition_of_set(rel: &Relation, xs: &AttrSet) -> TuplePartition {
    let mut acc = TuplePartition::single_block(rel.n_tuples());
    for a in xs.iter() {
        acc = meet(&acc, &delta(rel, a)).expect("same relation");
    }
    acc
}

/// `X -> Y` via the pattern structure. `{XY}^□` always refines `{X}^□`, so
/// equality reduces to equal block counts.
pub fn fd_holds(rel: &Relation, xs: &AttrSet, ys: &AttrSet) -> bool {
    let px = partition_of_set(rel, xs);
    let pxy = partition_of_set(rel, &xs.union(ys));
    px.n_blocks() == pxy.n_blocks()
}

/// Lattice order: every block of `p` lies inside some block of `q`.
pub fn refines(p: &TuplePartition, q: &TuplePartition) -> Result<bool> {
    same_range(p, q)?;
    Ok(labels::refines(&p.labels, &q.labels))
}
