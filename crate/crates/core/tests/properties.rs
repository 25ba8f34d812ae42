mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use critlat::congruence::{con_lattice, principal_congruence, quotient};
use critlat::critpoint::crit_gate;
use critlat::io::{lattice_from_str, lattice_to_string};
use critlat::iso::find_isomorphism;
use critlat::{Budget, FiniteLattice};

fn corpus() -> &'static [Arc<FiniteLattice>] {
    static C: OnceLock<Vec<Arc<FiniteLattice>>> = OnceLock::new();
    C.get_or_init(|| {
        let mut v: Vec<Arc<FiniteLattice>> = common::all_lattices(6).into_iter().map(Arc::new).collect();
        v.extend(common::named_corpus());
        v
    })
}

fn lattice() -> impl Strategy<Value = Arc<FiniteLattice>> {
    (0..corpus().len()).prop_map(|i| corpus()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn con_is_distributive_with_matching_bounds(l in lattice()) {
        let con = con_lattice(&l, &Budget::default()).unwrap();
        prop_assert!(con.is_distributive());
        prop_assert!(con.member(con.zero()).is_zero());
        prop_assert!(con.member(con.one()).is_one());
    }

    #[test]
    fn principal_congruence_is_least(l in lattice(), a in 0usize..16, b in 0usize..16) {
        let (a, b) = (a % l.len(), b % l.len());
        let t = principal_congruence(&l, a, b);
        prop_assert!(t.related(a, b));
        let con = con_lattice(&l, &Budget::default()).unwrap();
        for c in con.members().iter().filter(|c| c.related(a, b)) {
            prop_assert!(t.leq(c));
        }
    }

    #[test]
    fn quotient_is_a_lattice_and_projection_is_onto(l in lattice(), a in 0usize..16, b in 0usize..16) {
        let t = principal_congruence(&l, a % l.len(), b % l.len());
        let (q, pi) = quotient(&t).unwrap();
        prop_assert_eq!(q.len(), t.num_blocks());
        prop_assert!(pi.is_surjective());
        prop_assert!(q.check_laws().is_ok());
    }

    #[test]
    fn dual_is_an_involution_with_the_same_congruences(l in lattice()) {
        let d = Arc::new(l.dual());
        prop_assert_eq!(&d.dual(), &*l);
        let b = Budget::default();
        let (cl, cd) = (con_lattice(&l, &b).unwrap(), con_lattice(&d, &b).unwrap());
        prop_assert_eq!(cl.len(), cd.len());
        prop_assert!(cl.members().iter().zip(cd.members()).all(|(x, y)| x.classes() == y.classes()));
    }

    #[test]
    fn lattice_files_round_trip(l in lattice()) {
        let back = lattice_from_str(&lattice_to_string(&l)).unwrap();
        prop_assert_eq!(&back, &*l);
        prop_assert!(find_isomorphism(&back, &l).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gate_is_invariant_under_dualizing(i in 0usize..6, j in 0usize..6) {
        let small: Vec<Arc<FiniteLattice>> = corpus().iter().filter(|l| l.len() <= 5).cloned().collect();
        let (k, l) = (&small[i % small.len()], &small[j % small.len()]);
        let b = Budget::default();
        let plain = crit_gate(k, l, &b).unwrap().verdict;
        let dual = crit_gate(&Arc::new(k.dual()), &Arc::new(l.dual()), &b).unwrap().verdict;
        prop_assert_eq!(plain, dual);
    }
}
