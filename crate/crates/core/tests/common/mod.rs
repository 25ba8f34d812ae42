//! Brute-force oracles shared by the integration tests. Nothing here relies on
//! the library's own algorithms beyond table lookups on `FiniteLattice`.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use critlat::builtin;
use critlat::iso::find_isomorphism;
use critlat::FiniteLattice;

/// Every partition of `0..n` as a restricted growth string.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max {
            cur.push(c);
            go(i + 1, n, if c == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        go(0, n, 0, &mut Vec::new(), &mut out);
    }
    out
}

fn compatible(l: &FiniteLattice, class: &[usize]) -> bool {
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            if class[a] != class[b] {
                continue;
            }
            for c in 0..n {
                if class[l.meet(a, c)] != class[l.meet(b, c)] || class[l.join(a, c)] != class[l.join(b, c)] {
                    return false;
                }
            }
        }
    }
    true
}

/// All congruences of `l` by testing every partition.
pub fn brute_congruences(l: &FiniteLattice) -> BTreeSet<Vec<usize>> {
    partitions(l.len()).into_iter().filter(|p| compatible(l, p)).collect()
}

/// Nonempty subsets closed under meet and join, as sorted element lists.
pub fn brute_subuniverses(l: &FiniteLattice) -> BTreeSet<Vec<usize>> {
    let n = l.len();
    assert!(n <= 16);
    (1u32..1 << n)
        .filter(|&m| {
            let has = |x: usize| m >> x & 1 == 1;
            (0..n).filter(|&a| has(a)).all(|a| (0..n).filter(|&b| has(b)).all(|b| has(l.meet(a, b)) && has(l.join(a, b))))
        })
        .map(|m| (0..n).filter(|&x| m >> x & 1 == 1).collect())
        .collect()
}

/// Isotone surjections from the `n`-element chain onto the `m`-element chain,
/// by trying every map.
pub fn brute_isotone_surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push(c % m);
            c /= m;
        }
        v.reverse();
        let iso = v.windows(2).all(|w| w[0] <= w[1]);
        let onto = (0..m).all(|y| v.contains(&y));
        if iso && onto {
            out.push(v);
        }
    }
    out.sort();
    out
}

fn dedup_iso(ls: Vec<FiniteLattice>) -> Vec<FiniteLattice> {
    let mut out: Vec<FiniteLattice> = Vec::new();
    for l in ls {
        if !out.iter().any(|o| o.len() == l.len() && find_isomorphism(o, &l).is_some()) {
            out.push(l);
        }
    }
    out
}

/// Every lattice with `1..=max` elements, one per isomorphism class.
///
/// The middle elements range over naturally labelled posets, which cover
/// every poset up to isomorphism; bounds are added and the result is kept
/// when it is a lattice.
pub fn all_lattices(max: usize) -> Vec<FiniteLattice> {
    let mut found = Vec::new();
    for n in 1..=max {
        if n <= 2 {
            found.push(builtin::chain(n - 1).with_name(format!("L{n}")));
            continue;
        }
        let k = n - 2;
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let mut rel = vec![false; k * k];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                rel[i * k + j] = mask >> b & 1 == 1;
            }
            let transitive = (0..k).all(|i| (0..k).all(|j| !rel[i * k + j] || (0..k).all(|l| !rel[j * k + l] || rel[i * k + l])));
            if !transitive {
                continue;
            }
            // Element 0 is the bottom, n-1 the top, 1..=k the middle.
            let mut leq = vec![false; n * n];
            for x in 0..n {
                leq[x] = true;
                leq[x * n + n - 1] = true;
                leq[x * n + x] = true;
            }
            for i in 0..k {
                for j in 0..k {
                    if rel[i * k + j] {
                        leq[(i + 1) * n + j + 1] = true;
                    }
                }
            }
            let labels = (0..n).map(|i| format!("e{i}")).collect();
            if let Ok(l) = FiniteLattice::from_order(format!("L{n}_{mask}"), labels, leq) {
                found.push(l);
            }
        }
    }
    dedup_iso(found)
}

/// Every distributive lattice with `1..=max` elements up to isomorphism, as
/// down-set lattices of posets with at most `max` down-sets.
pub fn distributive_lattices(max: usize) -> Vec<FiniteLattice> {
    // A poset on 0..k is naturally labelled: below[i] is a bitmask of
    // elements below i, all with smaller index.
    fn downsets(below: &[u32]) -> Vec<u32> {
        let k = below.len();
        (0u32..1 << k)
            .filter(|&s| (0..k).filter(|&i| s >> i & 1 == 1).all(|i| below[i] & !s == 0))
            .collect()
    }
    fn go(below: &mut Vec<u32>, max: usize, out: &mut Vec<Vec<u32>>) {
        let ds = downsets(below);
        if ds.len() > max {
            return;
        }
        out.push(ds.clone());
        // The strict down-set of the new element is itself a down-set.
        for d in ds {
            below.push(d);
            go(below, max, out);
            below.pop();
        }
    }
    let mut all = Vec::new();
    go(&mut Vec::new(), max, &mut all);
    let lattices = all
        .into_iter()
        .map(|ds| {
            let n = ds.len();
            let leq = (0..n * n).map(|c| ds[c / n] & !ds[c % n] == 0).collect();
            let labels = ds.iter().map(|s| format!("d{s:b}")).collect();
            FiniteLattice::from_order(format!("D{n}"), labels, leq).expect("down-sets form a lattice")
        })
        .collect();
    dedup_iso(lattices)
}

/// The named lattices used alongside the exhaustive corpus.
pub fn named_corpus() -> Vec<Arc<FiniteLattice>> {
    let mut v = vec![builtin::m(3), builtin::m(4), builtin::m(5), builtin::n5(), builtin::boolean(3), builtin::f22()];
    v.extend((1..=5).map(builtin::chain));
    v.into_iter().map(Arc::new).collect()
}
