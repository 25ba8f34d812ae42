mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use critlat::builtin;
use critlat::congruence::{con_lattice, con_lattice_all_pairs};
use critlat::diagram::isotone_surjections;
use critlat::sublattice::enumerate_subuniverse_sets;
use critlat::variety::hs_member;
use critlat::Budget;

#[test]
fn corpus_counts_match_known_sequences() {
    assert_eq!(common::partitions(4).len(), 15);
    let all = common::all_lattices(6);
    let counts: Vec<usize> = (1..=6).map(|n| all.iter().filter(|l| l.len() == n).count()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5, 15]);
    let dist = common::distributive_lattices(8);
    let counts: Vec<usize> = (1..=8).map(|n| dist.iter().filter(|l| l.len() == n).count()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 3, 5, 8, 15]);
    assert!(dist.iter().all(|l| l.is_distributive()));
}

#[test]
fn subuniverses_match_subset_filter() {
    let b = Budget::default();
    let mut corpus: Vec<Arc<_>> = common::all_lattices(6).into_iter().map(Arc::new).collect();
    corpus.extend(common::named_corpus());
    for l in corpus {
        let got: BTreeSet<Vec<usize>> = enumerate_subuniverse_sets(&l, usize::MAX, &b).unwrap().into_iter().collect();
        assert_eq!(got, common::brute_subuniverses(&l), "{}", l.name());
    }
    assert_eq!(common::brute_subuniverses(&builtin::m(3)).len(), 19);
}

#[test]
fn principal_joins_equal_all_pairs() {
    let b = Budget::default();
    for l in common::named_corpus() {
        assert_eq!(con_lattice(&l, &b).unwrap(), con_lattice_all_pairs(&l, &b).unwrap(), "{}", l.name());
    }
}

#[test]
fn isotone_surjections_match_brute_force() {
    for n in 1..=6 {
        for m in 1..=n {
            assert_eq!(isotone_surjections(n, m), common::brute_isotone_surjections(n, m), "{n} onto {m}");
        }
    }
}

#[test]
fn every_small_lattice_lies_in_its_own_hs() {
    let b = Budget::default();
    for l in common::all_lattices(5) {
        let l = Arc::new(l);
        let w = hs_member(&l, &l, &b).unwrap().expect("L is in HS(L)");
        w.replay(&l, &l).unwrap();
    }
}
