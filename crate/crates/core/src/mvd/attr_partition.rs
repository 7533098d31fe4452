use std::fmt;

use crate::error::{Error, Result};
use crate::labels;
use crate::relation::{AttrSet, Relation};

/// A partition of the attribute indices `0..n`, in canonical label form.
///
/// Order convention used throughout the crate: `p <= q` iff `p` refines `q`,
/// so the all-singletons partition is the bottom and the single block the top.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrPartition {
    labels: Vec<u32>,
    n_blocks: usize,
}

impl AttrPartition {
    pub(crate) fn from_keys<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let (labels, n_blocks) = labels::canonical(keys);
        AttrPartition { labels, n_blocks }
    }

    /// Builds a partition from blocks that must cover `0..n` disjointly.
    pub fn from_blocks<B: AsRef<[usize]>>(blocks: &[B], n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::contract("empty block in attribute partition"));
            }
            for &a in block {
                if a >= n || owner[a] != usize::MAX {
                    return Err(Error::contract(format!(
                        "attribute {a} out of range or in two blocks"
                    )));
                }
                owner[a] = b;
            }
        }
        if let Some(a) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::contract(format!("attribute {a} is in no block")));
        }
        Ok(Self::from_keys(owner))
    }

    /// All attributes in their own block.
    pub fn discrete(n: usize) -> Self {
        AttrPartition {
            labels: (0..n as u32).collect(),
            n_blocks: n,
        }
    }

    pub fn single_block(n: usize) -> Self {
        AttrPartition {
            labels: vec![0; n],
            n_blocks: usize::from(n > 0),
        }
    }

    pub fn n_attrs(&self) -> usize {
        self.labels.len()
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

    pub fn block_of(&self, a: usize) -> u32 {
        self.labels[a]
    }

    pub fn is_discrete(&self) -> bool {
        self.n_blocks == self.labels.len()
    }

    pub fn is_single_block(&self) -> bool {
        self.n_blocks <= 1
    }

    /// `self <= other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &AttrPartition) -> bool {
        assert_eq!(
            self.n_attrs(),
            other.n_attrs(),
            "partitions of different attribute sets"
        );
        labels::refines(&self.labels, &other.labels)
    }

    /// Common refinement: blocks are the non-empty pairwise intersections.
    pub fn meet(&self, other: &AttrPartition) -> AttrPartition {
        assert_eq!(
            self.n_attrs(),
            other.n_attrs(),
            "partitions of different attribute sets"
        );
        Self::from_keys(self.labels.iter().zip(&other.labels).map(|(a, b)| (*a, *b)))
    }

    /// Finest common coarsening: attributes linked through either partition
    /// end up in one block.
    pub fn join(&self, other: &AttrPartition) -> AttrPartition {
        assert_eq!(
            self.n_attrs(),
            other.n_attrs(),
            "partitions of different attribute sets"
        );
        let n = self.n_attrs();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.n_blocks];
            for a in 0..n {
                let l = p.labels[a] as usize;
                if first[l] == usize::MAX {
                    first[l] = a;
                } else {
                    let (x, y) = (find(&mut parent, first[l]), find(&mut parent, a));
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        Self::from_keys((0..n).map(|a| find(&mut parent, a)))
    }

    /// Every partition of `0..n`, generated as restricted growth strings in
    /// lexicographic order. There are Bell(n) of them.
    pub fn enumerate(n: usize) -> Vec<AttrPartition> {
        let mut out = Vec::new();
        if n == 0 {
            out.push(AttrPartition::discrete(0));
            return out;
        }
        let mut rgs = vec![0u32; n];
        loop {
            out.push(Self::from_keys(rgs.iter().copied()));
            // Increment the rightmost position that can still grow.
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return out;
                }
                let bound = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
                if rgs[i] < bound {
                    rgs[i] += 1;
                    for r in rgs.iter_mut().skip(i + 1) {
                        *r = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    /// Renders as `a|b,c|d` using the relation's attribute names.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&a| names[a].as_ref())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses `a|b,c|d` against the relation's attribute names; the blocks
    /// must cover every attribute exactly once.
    pub fn parse(text: &str, rel: &Relation) -> Result<Self> {
        let blocks = parse_blocks(text, rel)?;
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.as_slice().to_vec()).collect();
        Self::from_blocks(&blocks, rel.n_attrs())
    }
}

/// Parses `a|b,c|d` into attribute sets without checking coverage.
pub fn parse_blocks(text: &str, rel: &Relation) -> Result<Vec<AttrSet>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split('|')
        .map(|block| {
            let names: Vec<&str> = block
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            if names.is_empty() {
                return Err(Error::contract(format!("empty block in \"{text}\"")));
            }
            rel.attr_set_by_names(&names)
        })
        .collect()
}

impl fmt::Debug for AttrPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n_attrs()).map(|a| a.to_string()).collect();
        write!(f, "<{}>", self.display_with(&names))
    }
}
