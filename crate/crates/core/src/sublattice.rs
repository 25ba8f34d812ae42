//! Sublattices, subuniverse enumeration, chains and partial sublattices.

use std::collections::HashSet;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, Homomorphism};

/// A sublattice of a host lattice together with its inclusion map.
///
/// `elements` lists host indices in increasing order; element `i` of
/// `lattice` is host element `elements[i]` and carries the same label.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub lattice: Arc<FiniteLattice>,
    pub elements: Vec<Elem>,
    pub inclusion: Homomorphism,
}

impl Sublattice {
    /// Induced sublattice on a closed subset; fails if the subset is not closed.
    pub fn new(host: &Arc<FiniteLattice>, subset: &[Elem]) -> Result<Self> {
        let mut elements = subset.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::NotASublattice("empty subset".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| x >= host.len()) {
            return Err(Error::NotASublattice(format!("element index {x} out of range")));
        }
        let mut pos = vec![usize::MAX; host.len()];
        for (i, &x) in elements.iter().enumerate() {
            pos[x] = i;
        }
        let k = elements.len();
        let mut meet = vec![0; k * k];
        let mut join = vec![0; k * k];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let (m, jn) = (pos[host.meet(a, b)], pos[host.join(a, b)]);
                if m == usize::MAX || jn == usize::MAX {
                    return Err(Error::NotASublattice(format!(
                        "`{}` and `{}` escape the subset",
                        host.label(a),
                        host.label(b)
                    )));
                }
                meet[i * k + j] = m;
                join[i * k + j] = jn;
            }
        }
        let labels = elements.iter().map(|&x| host.label(x).to_string()).collect();
        let name = format!("sub({})", host.name());
        let lattice = Arc::new(FiniteLattice::from_tables(name, labels, meet, join)?);
        let inclusion = Homomorphism::new_unchecked(lattice.clone(), host.clone(), elements.clone());
        Ok(Sublattice { lattice, elements, inclusion })
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// Smallest meet- and join-closed subset containing `seed`, as host indices.
pub fn closure_set(host: &FiniteLattice, seed: &[Elem]) -> Vec<Elem> {
    let mut member = vec![false; host.len()];
    let mut items = Vec::new();
    for &x in seed {
        if !std::mem::replace(&mut member[x], true) {
            items.push(x);
        }
    }
    let mut i = 0;
    while i < items.len() {
        let a = items[i];
        let mut j = 0;
        while j <= i {
            let b = items[j];
            for c in [host.meet(a, b), host.join(a, b)] {
                if !std::mem::replace(&mut member[c], true) {
                    items.push(c);
                }
            }
            j += 1;
        }
        i += 1;
    }
    items.sort_unstable();
    items
}

/// The sublattice generated by `seed`.
pub fn subuniverse_closure(host: &Arc<FiniteLattice>, seed: &[Elem]) -> Result<Sublattice> {
    if seed.is_empty() {
        return Err(Error::NotASublattice("empty generating set".into()));
    }
    Sublattice::new(host, &closure_set(host, seed))
}

/// The bounded sublattice generated by `seed`: the closure of `seed ∪ {0, 1}`.
pub fn bounded_subuniverse_closure(host: &Arc<FiniteLattice>, seed: &[Elem]) -> Result<Sublattice> {
    let mut s = seed.to_vec();
    s.push(host.bottom());
    s.push(host.top());
    subuniverse_closure(host, &s)
}

/// Canonical order on subuniverses: smaller first, then lexicographic.
fn subset_key(set: &[Elem]) -> (usize, Vec<Elem>) {
    (set.len(), set.to_vec())
}

/// Every nonempty subuniverse of `host`, as sorted host-index sets in
/// canonical order (by size, then lexicographically).
pub fn enumerate_subuniverse_sets(host: &FiniteLattice, max_count: usize, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
    if host.len() > budget.max_subuniverse_host || host.len() > 128 {
        return Err(Error::BudgetExceeded(format!(
            "subuniverse enumeration limited to {} elements, lattice has {}",
            budget.max_subuniverse_host.min(128),
            host.len()
        )));
    }
    let to_mask = |set: &[Elem]| set.iter().fold(0u128, |m, &x| m | (1u128 << x));
    let mut seen: HashSet<u128> = HashSet::new();
    let mut frontier: Vec<Vec<Elem>> = Vec::new();
    for x in host.elements() {
        let c = closure_set(host, &[x]);
        if seen.insert(to_mask(&c)) {
            frontier.push(c);
        }
    }
    let mut all = frontier.clone();
    while let Some(set) = frontier.pop() {
        if all.len() > max_count {
            return Err(Error::BudgetExceeded(format!("more than {max_count} subuniverses")));
        }
        let mask = to_mask(&set);
        for x in host.elements() {
            if mask >> x & 1 == 1 {
                continue;
            }
            let mut seed = set.clone();
            seed.push(x);
            let c = closure_set(host, &seed);
            if seen.insert(to_mask(&c)) {
                all.push(c.clone());
                frontier.push(c);
            }
        }
    }
    if all.len() > max_count {
        return Err(Error::BudgetExceeded(format!("more than {max_count} subuniverses")));
    }
    all.sort_by_key(|s| subset_key(s));
    Ok(all)
}

/// Every nonempty subuniverse of `host` as a [`Sublattice`], in canonical order.
pub fn enumerate_subuniverses(host: &Arc<FiniteLattice>, max_count: usize, budget: &Budget) -> Result<Vec<Sublattice>> {
    enumerate_subuniverse_sets(host, max_count, budget)?
        .iter()
        .map(|s| Sublattice::new(host, s))
        .collect()
}

/// Chains `x0 < ... < xk` drawn from `pool`, from `from` to `to`, with
/// `k` in `lengths`. Output is in lexicographic order of index sequences.
pub fn chains_between(l: &FiniteLattice, pool: &[Elem], from: Elem, to: Elem, lengths: &[usize]) -> Vec<Vec<Elem>> {
    let max_len = lengths.iter().copied().max().unwrap_or(0);
    let mut pool: Vec<Elem> = pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut out = Vec::new();
    let mut path = vec![from];
    fn go(
        l: &FiniteLattice,
        pool: &[Elem],
        to: Elem,
        lengths: &[usize],
        max_len: usize,
        path: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let cur = *path.last().unwrap();
        let steps = path.len() - 1;
        if cur == to {
            if lengths.contains(&steps) {
                out.push(path.clone());
            }
            return;
        }
        if steps >= max_len {
            return;
        }
        for &y in pool {
            if l.lt(cur, y) && l.leq(y, to) {
                path.push(y);
                go(l, pool, to, lengths, max_len, path, out);
                path.pop();
            }
        }
    }
    if from == to {
        if lengths.contains(&0) {
            out.push(path);
        }
        return out;
    }
    go(l, &pool, to, lengths, max_len, &mut path, &mut out);
    out
}

/// Every maximal chain of `l`, bottom to top.
pub fn maximal_chains(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut path = vec![l.bottom()];
    fn go(l: &FiniteLattice, path: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        let cur = *path.last().unwrap();
        if cur == l.top() {
            out.push(path.clone());
            return;
        }
        let ups: Vec<Elem> = l.upper_covers(cur).collect();
        for y in ups {
            path.push(y);
            go(l, path, out);
            path.pop();
        }
    }
    go(l, &mut path, &mut out);
    out
}

/// Chains from `0` to `1` whose length lies in `lengths`.
pub fn spanning_chains(l: &FiniteLattice, lengths: &[usize]) -> Vec<Vec<Elem>> {
    let all: Vec<Elem> = l.elements().collect();
    chains_between(l, &all, l.bottom(), l.top(), lengths)
}

/// A partial lattice: meets and joins are defined on some pairs only.
#[derive(Clone, Debug)]
pub struct PartialLattice {
    name: String,
    labels: Vec<String>,
    meet: Vec<Option<Elem>>,
    join: Vec<Option<Elem>>,
    bottom: Option<Elem>,
    top: Option<Elem>,
    /// Host lattice and host index of each element, for induced partial sublattices.
    host: Option<(Arc<FiniteLattice>, Vec<Elem>)>,
}

impl PartialLattice {
    /// A total lattice seen as a partial lattice.
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        let n = l.len();
        let mut meet = vec![None; n * n];
        let mut join = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = Some(l.meet(a, b));
                join[a * n + b] = Some(l.join(a, b));
            }
        }
        PartialLattice {
            name: l.name().to_string(),
            labels: l.labels().to_vec(),
            meet,
            join,
            bottom: Some(l.bottom()),
            top: Some(l.top()),
            host: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> Option<Elem> {
        self.bottom
    }

    pub fn top(&self) -> Option<Elem> {
        self.top
    }

    pub fn is_total(&self) -> bool {
        self.meet.iter().all(Option::is_some) && self.join.iter().all(Option::is_some)
    }

    /// Host lattice and host index of each element, when induced.
    pub fn host(&self) -> Option<(&Arc<FiniteLattice>, &[Elem])> {
        self.host.as_ref().map(|(h, e)| (h, e.as_slice()))
    }

    /// Pairs `(a, b)` with `a <= b` (index order) where the meet is defined.
    pub fn defined_meets(&self) -> Vec<(Elem, Elem, Elem)> {
        let n = self.len();
        let mut v = Vec::new();
        for a in 0..n {
            for b in a..n {
                if let Some(c) = self.meet(a, b) {
                    v.push((a, b, c));
                }
            }
        }
        v
    }

    pub fn defined_joins(&self) -> Vec<(Elem, Elem, Elem)> {
        let n = self.len();
        let mut v = Vec::new();
        for a in 0..n {
            for b in a..n {
                if let Some(c) = self.join(a, b) {
                    v.push((a, b, c));
                }
            }
        }
        v
    }

    /// Swaps the defined meets and joins, and the bounds.
    pub fn dual(&self) -> PartialLattice {
        PartialLattice {
            name: format!("dual({})", self.name),
            labels: self.labels.clone(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
            host: None,
        }
    }
}

/// The partial sublattice induced on `subset`: a meet or join is defined
/// exactly when its value in `host` lies in `subset`.
pub fn induced_partial_sublattice(host: &Arc<FiniteLattice>, subset: &[Elem]) -> Result<PartialLattice> {
    let mut elements = subset.to_vec();
    elements.sort_unstable();
    elements.dedup();
    if let Some(&x) = elements.iter().find(|&&x| x >= host.len()) {
        return Err(Error::UnknownLabel(format!("#{x}")));
    }
    if !elements.contains(&host.bottom()) || !elements.contains(&host.top()) {
        return Err(Error::NotSpanning);
    }
    let k = elements.len();
    let pos = |x: Elem| elements.binary_search(&x).ok();
    let mut meet = vec![None; k * k];
    let mut join = vec![None; k * k];
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            meet[i * k + j] = pos(host.meet(a, b));
            join[i * k + j] = pos(host.join(a, b));
        }
    }
    Ok(PartialLattice {
        name: format!("partial({})", host.name()),
        labels: elements.iter().map(|&x| host.label(x).to_string()).collect(),
        meet,
        join,
        bottom: pos(host.bottom()),
        top: pos(host.top()),
        host: Some((host.clone(), elements)),
    })
}

/// Spanning chains of an induced partial sublattice with length in `lengths`,
/// as host indices, bottom to top.
pub fn partial_spanning_chains(k: &PartialLattice, lengths: &[usize]) -> Result<Vec<Vec<Elem>>> {
    let (host, elems) = k
        .host()
        .ok_or_else(|| Error::PreconditionFailed("spanning chains need an induced partial sublattice".into()))?;
    let mut chains = chains_between(host, elems, host.bottom(), host.top(), lengths);
    chains.sort_by_key(|c| (c.len(), c.clone()));
    Ok(chains)
}

/// Injective map from `k` into `l` preserving every defined meet and join
/// (and the bounds, when `k` has them). Returns the lexicographically least
/// such map, or `None` after exhausting the search.
pub fn embed_partial(k: &PartialLattice, l: &FiniteLattice, budget: &Budget) -> Result<Option<Vec<Elem>>> {
    let n = k.len();
    if n > l.len() {
        return Ok(None);
    }
    // Constraint (a, b, c, is_meet) is checked once its largest index is assigned.
    let mut constraints: Vec<Vec<(Elem, Elem, Elem, bool)>> = vec![Vec::new(); n];
    for (a, b, c) in k.defined_meets() {
        constraints[a.max(b).max(c)].push((a, b, c, true));
    }
    for (a, b, c) in k.defined_joins() {
        constraints[a.max(b).max(c)].push((a, b, c, false));
    }
    let mut forced: Vec<Option<Elem>> = vec![None; n];
    if let (Some(b0), Some(t0)) = (k.bottom(), k.top()) {
        forced[b0] = Some(l.bottom());
        if b0 == t0 && l.bottom() != l.top() {
            // A one-element bounded partial lattice has nothing to preserve besides the map itself.
            forced[b0] = None;
        } else {
            forced[t0] = Some(l.top());
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; l.len()];
    let mut nodes = 0usize;
    fn go(
        i: usize,
        k: usize,
        l: &FiniteLattice,
        constraints: &[Vec<(Elem, Elem, Elem, bool)>],
        forced: &[Option<Elem>],
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
        cap: usize,
    ) -> Result<bool> {
        if i == k {
            return Ok(true);
        }
        let candidates: Vec<Elem> = match forced[i] {
            Some(y) => vec![y],
            None => l.elements().collect(),
        };
        for y in candidates {
            if used[y] {
                continue;
            }
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::BudgetExceeded(format!("embedding search exceeded {cap} nodes")));
            }
            map[i] = y;
            let ok = constraints[i].iter().all(|&(a, b, c, is_meet)| {
                let v = if is_meet { l.meet(map[a], map[b]) } else { l.join(map[a], map[b]) };
                v == map[c]
            });
            if ok {
                used[y] = true;
                if go(i + 1, k, l, constraints, forced, map, used, nodes, cap)? {
                    return Ok(true);
                }
                used[y] = false;
            }
        }
        map[i] = usize::MAX;
        Ok(false)
    }
    if go(0, n, l, &constraints, &forced, &mut map, &mut used, &mut nodes, budget.max_search_nodes)? {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}
