//! Restricted-growth labelling shared by the tuple and attribute partition types.
//!
//! A partition of `0..n` is stored as one label per element, where labels are
//! assigned in order of first occurrence. That makes the label vector a
//! canonical form: blocks ordered by minimum element, equality is structural.

use std::collections::HashMap;
use std::hash::Hash;

/// Relabels arbitrary block keys into canonical labels. Returns the labels and
/// the number of blocks.
pub(crate) fn canonical<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> (Vec<u32>, usize) {
    let mut ids: HashMap<K, u32> = HashMap::new();
    let labels = keys
        .into_iter()
        .map(|k| {
            let next = ids.len() as u32;
            *ids.entry(k).or_insert(next)
        })
        .collect();
    (labels, ids.len())
}

/// Materializes blocks from canonical labels; blocks come out sorted by
/// minimum element with ascending members.
pub(crate) fn blocks(labels: &[u32], n_blocks: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n_blocks];
    for (i, &l) in labels.iter().enumerate() {
        out[l as usize].push(i);
    }
    out
}

/// Whether every block of `fine` lies inside a block of `coarse`.
pub(crate) fn refines(fine: &[u32], coarse: &[u32]) -> bool {
    let mut image: HashMap<u32, u32> = HashMap::new();
    fine.iter()
        .zip(coarse)
        .all(|(f, c)| *image.entry(*f).or_insert(*c) == *c)
}
