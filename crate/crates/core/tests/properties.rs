mod common;

use depfca::context::{attr_closure, binarize, extent, implication_holds};
use depfca::dmvd_lattice::{dmvd_holds, meet_closure, vector_to_partition, AgreementVector};
use depfca::fd_discovery::discover_minimal_fds;
use depfca::mvd::{self, matches, AttrPartition, ClassFamily, Galois, GeneralizedMvd};
use depfca::oracle::{oracle_fd, oracle_finest_matching, oracle_meet_closure, oracle_mvd};
use depfca::partitions::{self, fd_holds, partition_of_set};
use depfca::relation::project;
use depfca::{AttrSet, IngestOptions, Relation};
use proptest::prelude::*;

fn relation(max_attrs: usize, max_tuples: usize, alphabet: u32) -> impl Strategy<Value = Relation> {
    (1..=max_attrs, 0..=max_tuples).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec(0..alphabet, m), n).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.to_string()).collect())
                .collect();
            Relation::new(common::names(m), rows, IngestOptions::default()).unwrap()
        })
    })
}

fn subset_of(m: usize, mask: u64) -> AttrSet {
    AttrSet::from_mask(mask & ((1u64 << m) - 1))
}

fn attr_partition(m: usize) -> impl Strategy<Value = AttrPartition> {
    let all = AttrPartition::enumerate(m);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn class_of(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|t| mask >> t & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tuple_partition_meet_laws(rel in relation(5, 12, 3), x in any::<u64>(), y in any::<u64>()) {
        let m = rel.n_attrs();
        let (xs, ys) = (subset_of(m, x), subset_of(m, y));
        let px = partition_of_set(&rel, &xs);
        let py = partition_of_set(&rel, &ys);
        let meet = partitions::meet(&px, &py).unwrap();
        prop_assert_eq!(&meet, &partitions::meet(&py, &px).unwrap());
        prop_assert_eq!(&partitions::meet(&px, &px).unwrap(), &px);
        prop_assert!(partitions::refines(&meet, &px).unwrap());
        prop_assert!(partitions::refines(&meet, &py).unwrap());
        prop_assert_eq!(&partition_of_set(&rel, &xs.union(&ys)), &meet);
        prop_assert_eq!(fd_holds(&rel, &xs, &ys), partitions::refines(&px, &py).unwrap());
    }

    #[test]
    fn fd_methods_agree_on_sets(rel in relation(6, 15, 3), x in any::<u64>(), y in any::<u64>()) {
        let m = rel.n_attrs();
        let (xs, ys) = (subset_of(m, x), subset_of(m, y));
        let ctx = binarize(&rel);
        let o = oracle_fd(&rel, &xs, &ys);
        prop_assert_eq!(fd_holds(&rel, &xs, &ys), o);
        prop_assert_eq!(implication_holds(&ctx, &xs, &ys), o);
        prop_assert_eq!(ys.is_subset(&attr_closure(&ctx, &xs)), o);
    }

    #[test]
    fn context_galois_laws(rel in relation(6, 10, 3), x in any::<u64>(), y in any::<u64>()) {
        let m = rel.n_attrs();
        let ctx = binarize(&rel);
        let (xs, ys) = (subset_of(m, x), subset_of(m, y));
        let big = xs.union(&ys);
        let (ex, eb) = (extent(&ctx, &xs), extent(&ctx, &big));
        prop_assert!(eb.iter().all(|o| ex.contains(o)), "extent is antitone");
        let cx = attr_closure(&ctx, &xs);
        prop_assert!(xs.is_subset(&cx));
        prop_assert_eq!(&attr_closure(&ctx, &cx), &cx);
        prop_assert!(cx.is_subset(&attr_closure(&ctx, &big)));
        prop_assert_eq!(ctx.n_objects(), rel.n_tuples() * rel.n_tuples().saturating_sub(1) / 2);
    }

    #[test]
    fn projection_invariants(rel in relation(5, 15, 3), x in any::<u64>(), y in any::<u64>()) {
        let m = rel.n_attrs();
        let (xs, ys) = (subset_of(m, x), subset_of(m, y));
        let px = project(&rel, &xs).unwrap();
        let pxy = project(&rel, &xs.union(&ys)).unwrap();
        prop_assert!(px.len() <= pxy.len());
        prop_assert!(pxy.len() <= rel.n_tuples());
        prop_assert_eq!(px.len(), partition_of_set(&rel, &xs).n_blocks());
        prop_assert_eq!(project(&rel, &AttrSet::empty()).unwrap().len(), rel.n_tuples().min(1));
    }

    #[test]
    fn discovery_sound_and_minimal(rel in relation(6, 20, 3), cap in 0usize..6) {
        let fds = discover_minimal_fds(&rel, Some(cap)).unwrap();
        for fd in &fds {
            let rhs = AttrSet::single(fd.rhs);
            prop_assert!(fd.lhs.len() <= cap);
            prop_assert!(!fd.lhs.contains(fd.rhs));
            prop_assert!(oracle_fd(&rel, &fd.lhs, &rhs));
            for a in fd.lhs.iter() {
                prop_assert!(!oracle_fd(&rel, &fd.lhs.without(a), &rhs), "lhs is not minimal");
            }
        }
    }

    #[test]
    fn attr_partition_lattice_laws(p in attr_partition(5), q in attr_partition(5), r in attr_partition(5)) {
        let meet = p.meet(&q);
        let join = p.join(&q);
        prop_assert!(meet.refines(&p) && meet.refines(&q));
        prop_assert!(p.refines(&join) && q.refines(&join));
        prop_assert_eq!(&meet, &q.meet(&p));
        prop_assert_eq!(&join, &q.join(&p));
        prop_assert_eq!(&p.meet(&join), &p);
        prop_assert_eq!(&p.join(&meet), &p);
        prop_assert_eq!(&meet.meet(&r), &p.meet(&q.meet(&r)));
        if r.refines(&p) && r.refines(&q) {
            prop_assert!(r.refines(&meet));
        }
    }

    #[test]
    fn meet_closure_matches_power_set(picks in prop::collection::vec(any::<prop::sample::Index>(), 0..7)) {
        let all = AttrPartition::enumerate(4);
        let gens: Vec<AttrPartition> = picks.iter().map(|i| i.get(&all).clone()).collect();
        let lat = meet_closure(gens.clone());
        prop_assert!(lat.is_meet_closed());
        prop_assert!(gens.iter().all(|g| lat.contains(g)));
        prop_assert_eq!(lat.elements().cloned().collect::<std::collections::BTreeSet<_>>(), oracle_meet_closure(&gens));
    }

    #[test]
    fn vector_to_partition_is_antitone(bits in prop::collection::vec(any::<bool>(), 1..7), extra in any::<u64>()) {
        let m = bits.len();
        let more: Vec<bool> = bits.iter().enumerate().map(|(i, &b)| b || extra >> i & 1 == 1).collect();
        let p = vector_to_partition(&AgreementVector(bits), m).unwrap();
        let q = vector_to_partition(&AgreementVector(more), m).unwrap();
        prop_assert!(q.refines(&p), "more agreement gives a finer partition");
    }

    #[test]
    fn matched_partitions_closed_under_meet_and_coarsening(
        rel in relation(4, 8, 2),
        mask in any::<u64>(),
        p in attr_partition(4),
        q in attr_partition(4),
    ) {
        prop_assume!(rel.n_attrs() == 4 && rel.n_tuples() > 0);
        let mut class = class_of(rel.n_tuples(), mask);
        if class.is_empty() {
            class.push(0);
        }
        let mp = matches(&rel, &p, &class).unwrap();
        let mq = matches(&rel, &q, &class).unwrap();
        if mp && mq {
            prop_assert!(matches(&rel, &p.meet(&q), &class).unwrap());
        }
        if mp {
            prop_assert!(matches(&rel, &p.join(&q), &class).unwrap());
        }
    }

    #[test]
    fn psi_is_finest_on_arbitrary_families(
        rel in relation(4, 8, 2),
        masks in prop::collection::vec(any::<u64>(), 1..4),
    ) {
        prop_assume!(rel.n_tuples() > 0);
        let n = rel.n_tuples();
        let classes: Vec<Vec<usize>> = masks
            .iter()
            .map(|&k| class_of(n, k))
            .filter(|c| !c.is_empty())
            .collect();
        let s = ClassFamily::new(&classes, n).unwrap();
        let got = mvd::psi(&rel, &s);
        prop_assert_eq!(&got, &oracle_finest_matching(&rel, &s).unwrap());
        for c in s.classes() {
            prop_assert!(matches(&rel, &got, c).unwrap());
        }
    }

    #[test]
    fn gamma_prime_extends_classes(rel in relation(4, 8, 2), masks in prop::collection::vec(any::<u64>(), 1..4)) {
        prop_assume!(rel.n_tuples() > 0);
        let n = rel.n_tuples();
        let classes: Vec<Vec<usize>> = masks
            .iter()
            .map(|&k| class_of(n, k))
            .filter(|c| !c.is_empty())
            .collect();
        let s = ClassFamily::new(&classes, n).unwrap();
        let g = Galois::new(&rel, 16).unwrap();
        let closed = g.gamma_prime(&s);
        prop_assert!(s.classes().all(|c| closed.absorbs(c)));
        prop_assert_eq!(&g.gamma_prime(&closed), &closed);
    }

    #[test]
    fn dmvd_implies_mvd(rel in relation(4, 8, 2), x in any::<u64>(), split in any::<u64>()) {
        let m = rel.n_attrs();
        let lhs = subset_of(m, x);
        let rest: Vec<usize> = (0..m).filter(|a| !lhs.contains(*a)).collect();
        prop_assume!(!rest.is_empty());
        let (y1, y2): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&a| split >> a & 1 == 1);
        let blocks: Vec<AttrSet> = [y1, y2]
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(AttrSet::new)
            .collect();
        let d = GeneralizedMvd::new(lhs, blocks, m).unwrap();
        let galois = mvd::mvd_holds(&rel, &d).unwrap();
        prop_assert_eq!(galois, oracle_mvd(&rel, &d));
        if dmvd_holds(&rel, &d) {
            prop_assert!(galois);
        }
    }
}
