//! Levelwise discovery of minimal functional dependencies.
//!
//! Candidate left-hand sides are visited by increasing size. Each candidate
//! carries a stripped partition (singleton blocks dropped) built as the
//! product of two partitions from the previous level, plus the set of
//! attributes it determines. `X -> a` is reported when `X` determines `a` and
//! no `X \ {b}` does; a candidate that determines every attribute is pruned
//! together with all of its supersets.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions;
use crate::relation::{AttrSet, Relation};

/// Default hard cap on the number of attributes a relation may have.
pub const DEFAULT_MAX_ATTRIBUTES: usize = 32;

/// `lhs -> rhs` with a single right-hand attribute not in `lhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionalDependency {
    pub lhs: AttrSet,
    pub rhs: usize,
}

impl FunctionalDependency {
    pub fn new(lhs: AttrSet, rhs: usize) -> Self {
        FunctionalDependency { lhs, rhs }
    }

    /// Renders the dependency with attribute names, e.g. `{a,b} -> c`.
    pub fn display(&self, rel: &Relation) -> String {
        format!(
            "{{{}}} -> {}",
            rel.names_of(&self.lhs).join(","),
            rel.attributes()[self.rhs]
        )
    }

    fn sort_key(&self) -> (usize, &[usize], usize) {
        (self.lhs.len(), self.lhs.as_slice(), self.rhs)
    }
}

/// JSON shape of one dependency: `{"lhs": [names], "rhs": name}`.
#[derive(Debug, Serialize)]
pub struct NamedFd<'a> {
    pub lhs: Vec<&'a str>,
    pub rhs: &'a str,
}

impl FunctionalDependency {
    pub fn named<'a>(&self, rel: &'a Relation) -> NamedFd<'a> {
        NamedFd {
            lhs: rel.names_of(&self.lhs),
            rhs: &rel.attributes()[self.rhs],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiscoveryOptions {
    /// Largest left-hand side considered; `None` means `|A| - 1`.
    pub max_lhs: Option<usize>,
    /// Refuse relations wider than this. Must not exceed 64.
    pub max_attributes: usize,
}

impl Default for DiscoveryOptions {
    fn default() -> Self {
        DiscoveryOptions {
            max_lhs: None,
            max_attributes: DEFAULT_MAX_ATTRIBUTES,
        }
    }
}

/// A partition with its singleton blocks elided.
#[derive(Debug, Clone)]
pub(crate) struct StrippedPartition {
    blocks: Vec<Vec<u32>>,
}

impl StrippedPartition {
    fn whole(n: usize) -> Self {
        let blocks = if n >= 2 {
            vec![(0..n as u32).collect()]
        } else {
            Vec::new()
        };
        StrippedPartition { blocks }
    }

    fn from_column(col: &[u32]) -> Self {
        let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
        for (t, &v) in col.iter().enumerate() {
            groups.entry(v).or_default().push(t as u32);
        }
        let mut blocks: Vec<Vec<u32>> = groups.into_values().filter(|b| b.len() >= 2).collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        StrippedPartition { blocks }
    }

    /// Blockwise intersection, dropping singletons. `owner` is scratch space
    /// of length `n` filled with `u32::MAX` on entry and on exit.
    fn product(&self, other: &StrippedPartition, owner: &mut [u32]) -> StrippedPartition {
        for (i, b) in self.blocks.iter().enumerate() {
            for &t in b {
                owner[t as usize] = i as u32;
            }
        }
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); self.blocks.len()];
        let mut out = Vec::new();
        for b in &other.blocks {
            for &t in b {
                let o = owner[t as usize];
                if o != u32::MAX {
                    buckets[o as usize].push(t);
                }
            }
            for &t in b {
                let o = owner[t as usize];
                if o != u32::MAX {
                    let bucket = &mut buckets[o as usize];
                    if bucket.len() >= 2 {
                        out.push(std::mem::take(bucket));
                    } else {
                        bucket.clear();
                    }
                }
            }
        }
        for b in &self.blocks {
            for &t in b {
                owner[t as usize] = u32::MAX;
            }
        }
        StrippedPartition { blocks: out }
    }

    /// Whether every block is constant on `col`, i.e. the partition refines
    /// the one induced by `col`.
    fn determines(&self, col: &[u32]) -> bool {
        self.blocks.iter().all(|b| {
            let v = col[b[0] as usize];
            b.iter().all(|&t| col[t as usize] == v)
        })
    }
}

struct Node {
    mask: u64,
    /// Attributes determined by `mask`, including `mask` itself.
    closure: u64,
    partition: StrippedPartition,
}

/// All minimal non-trivial FDs with `|lhs| <= max_lhs` (default `|A| - 1`).
pub fn discover_minimal_fds(
    rel: &Relation,
    max_lhs: Option<usize>,
) -> Result<Vec<FunctionalDependency>> {
    discover_with(
        rel,
        &DiscoveryOptions {
            max_lhs,
            ..Default::default()
        },
    )
}

pub fn discover_with(rel: &Relation, opts: &DiscoveryOptions) -> Result<Vec<FunctionalDependency>> {
    let m = rel.n_attrs();
    let cap = opts.max_attributes.min(64);
    if m > cap {
        return Err(Error::capacity("attribute count", m, cap));
    }
    let n = rel.n_tuples();
    let full: u64 = if m == 64 { !0 } else { (1u64 << m) - 1 };
    let max_lhs = opts.max_lhs.unwrap_or(m.saturating_sub(1)).min(m);
    let columns: Vec<&[u32]> = (0..m).map(|a| rel.column(a)).collect();

    let mut found = Vec::new();
    let mut owner = vec![u32::MAX; n];

    let mut level = vec![Node {
        mask: 0,
        closure: 0,
        partition: StrippedPartition::whole(n),
    }];
    let mut size = 0usize;
    let mut prev_closure: HashMap<u64, u64> = HashMap::new();

    loop {
        for node in level.iter_mut() {
            let mut inherited = node.mask;
            for b in bits(node.mask) {
                inherited |= prev_closure[&(node.mask & !(1 << b))];
            }
            let mut closure = inherited;
            for a in bits(full & !inherited) {
                if node.partition.determines(columns[a]) {
                    found.push(FunctionalDependency::new(AttrSet::from_mask(node.mask), a));
                    closure |= 1 << a;
                }
            }
            node.closure = closure;
        }
        if size >= max_lhs {
            break;
        }

        // Candidates that determine everything yield no further minimal FDs.
        level.retain(|n| n.closure != full);
        level.sort_unstable_by_key(|n| n.mask);
        prev_closure = level.iter().map(|n| (n.mask, n.closure)).collect();
        let next = if size == 0 {
            if level.is_empty() {
                Vec::new()
            } else {
                (0..m)
                    .map(|a| Node {
                        mask: 1 << a,
                        closure: 0,
                        partition: StrippedPartition::from_column(columns[a]),
                    })
                    .collect()
            }
        } else {
            next_level(&level, &prev_closure, &mut owner)
        };
        if next.is_empty() {
            break;
        }
        level = next;
        size += 1;
    }

    found.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(found)
}

/// Joins pairs of same-size sets that differ only in their highest attribute,
/// keeping a union only when all of its immediate subsets survived pruning.
fn next_level(level: &[Node], kept: &HashMap<u64, u64>, owner: &mut [u32]) -> Vec<Node> {
    let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, node) in level.iter().enumerate() {
        let high = 63 - node.mask.leading_zeros();
        groups.entry(node.mask & !(1 << high)).or_default().push(i);
    }
    let mut prefixes: Vec<u64> = groups.keys().copied().collect();
    prefixes.sort_unstable();

    let mut out = Vec::new();
    for prefix in prefixes {
        let members = &groups[&prefix];
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                let mask = level[i].mask | level[j].mask;
                if bits(mask).all(|b| kept.contains_key(&(mask & !(1 << b)))) {
                    let partition = level[i].partition.product(&level[j].partition, owner);
                    out.push(Node {
                        mask,
                        closure: 0,
                        partition,
                    });
                }
            }
        }
    }
    out.sort_unstable_by_key(|n| n.mask);
    out
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Whether every listed FD holds in `rel`.
pub fn fd_cover_check(rel: &Relation, fds: &[FunctionalDependency]) -> bool {
    fds.iter()
        .all(|fd| partitions::fd_holds(rel, &fd.lhs, &AttrSet::single(fd.rhs)))
}
