//! Corpus builders shared by the integration suites.
#![allow(dead_code)]

use depfca::{IngestOptions, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// A relation with `m` attributes, `n` tuples, values drawn from `0..alphabet`.
pub fn random_relation(rng: &mut impl Rng, m: usize, n: usize, alphabet: u32) -> Relation {
    let rows = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| rng.gen_range(0..alphabet).to_string())
                .collect()
        })
        .collect();
    Relation::new(names(m), rows, IngestOptions::default()).unwrap()
}

/// Random shape within the given bounds: `1..=max_attrs` attributes,
/// `0..=max_tuples` tuples, alphabet size in `alphabet`.
pub fn random_shaped(
    rng: &mut impl Rng,
    max_attrs: usize,
    max_tuples: usize,
    alphabet: std::ops::RangeInclusive<u32>,
) -> Relation {
    let m = rng.gen_range(1..=max_attrs);
    let n = rng.gen_range(0..=max_tuples);
    let k = rng.gen_range(alphabet);
    random_relation(rng, m, n, k)
}

/// The relation whose rows are the binary encodings selected by `rows`.
pub fn binary_relation(m: usize, rows: &[u32]) -> Relation {
    let rows = rows
        .iter()
        .map(|r| (0..m).map(|a| (r >> a & 1).to_string()).collect())
        .collect();
    Relation::new(names(m), rows, IngestOptions::default()).unwrap()
}

/// Every relation over `{0,1}` with `1..=max_attrs` attributes and at most
/// `max_tuples` distinct tuples, as sets of rows in ascending order.
pub fn all_binary_relations(max_attrs: usize, max_tuples: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for m in 1..=max_attrs {
        let universe = 1u32 << m;
        for k in 0..=max_tuples.min(universe as usize) {
            for_each_combination(universe, k, &mut |rows| out.push(binary_relation(m, rows)));
        }
    }
    out
}

fn for_each_combination(universe: u32, k: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(start: u32, universe: u32, k: usize, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for r in start..universe {
            if universe - r < (k - acc.len()) as u32 {
                break;
            }
            acc.push(r);
            rec(r + 1, universe, k, acc, f);
            acc.pop();
        }
    }
    rec(0, universe, k, &mut Vec::with_capacity(k), f);
}
