//! Lattice isomorphism by invariant-pruned backtracking.

use std::sync::Arc;

use crate::lattice::{Elem, FiniteLattice, Homomorphism};

/// Per-element invariants preserved by any order isomorphism.
fn signature(l: &FiniteLattice, x: Elem) -> [usize; 5] {
    let down = l.elements().filter(|&y| l.leq(y, x)).count();
    let up = l.elements().filter(|&y| l.leq(x, y)).count();
    [l.height(x), l.upper_covers(x).count(), l.lower_covers(x).count(), down, up]
}

fn profile(l: &FiniteLattice) -> Vec<[usize; 5]> {
    let mut v: Vec<_> = l.elements().map(|x| signature(l, x)).collect();
    v.sort_unstable();
    v
}

/// An order isomorphism `k -> l`, or `None`.
///
/// The witness is the lexicographically least map in the canonical element
/// order of `k`.
pub fn is_isomorphic(k: &Arc<FiniteLattice>, l: &Arc<FiniteLattice>) -> Option<Homomorphism> {
    find_isomorphism(k, l).map(|map| Homomorphism::new_unchecked(k.clone(), l.clone(), map))
}

/// Raw isomorphism map, see [`is_isomorphic`].
pub fn find_isomorphism(k: &FiniteLattice, l: &FiniteLattice) -> Option<Vec<Elem>> {
    let n = k.len();
    if n != l.len() || k.covers().len() != l.covers().len() {
        return None;
    }
    if profile(k) != profile(l) {
        return None;
    }
    let sk: Vec<_> = k.elements().map(|x| signature(k, x)).collect();
    let sl: Vec<_> = l.elements().map(|x| signature(l, x)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        k: &FiniteLattice,
        l: &FiniteLattice,
        sk: &[[usize; 5]],
        sl: &[[usize; 5]],
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == k.len() {
            return true;
        }
        for y in l.elements() {
            if used[y] || sk[i] != sl[y] {
                continue;
            }
            let ok = (0..i).all(|j| k.leq(j, i) == l.leq(map[j], y) && k.leq(i, j) == l.leq(y, map[j]));
            if ok {
                map[i] = y;
                used[y] = true;
                if go(i + 1, k, l, sk, sl, map, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    go(0, k, l, &sk, &sl, &mut map, &mut used).then_some(map)
}

/// Whether `k` is isomorphic to `l` or to the dual of `l`.
pub fn is_isomorphic_or_dual(k: &FiniteLattice, l: &FiniteLattice) -> bool {
    find_isomorphism(k, l).is_some() || find_isomorphism(k, &l.dual()).is_some()
}
