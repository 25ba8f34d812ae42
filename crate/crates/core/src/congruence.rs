//! Congruences of finite lattices, the congruence lattice, and `Conc` on maps.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::budget::{par_map, Budget};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, Homomorphism};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn classes(&mut self) -> Vec<usize> {
        let raw: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        canonical_classes(&raw)
    }
}

/// Renumbers block ids so that blocks are numbered by their least element.
fn canonical_classes(raw: &[usize]) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    raw.iter()
        .map(|r| {
            let next = ids.len();
            *ids.entry(*r).or_insert(next)
        })
        .collect()
}

/// Merges `pairs` and closes under compatibility with meet and join.
fn close(host: &FiniteLattice, uf: &mut UnionFind, pairs: impl IntoIterator<Item = (Elem, Elem)>) {
    let mut queue = Vec::new();
    for (a, b) in pairs {
        if uf.union(a, b) {
            queue.push((a, b));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for z in host.elements() {
            for (x, y) in [(host.meet(a, z), host.meet(b, z)), (host.join(a, z), host.join(b, z))] {
                if uf.union(x, y) {
                    queue.push((x, y));
                }
            }
        }
    }
}

/// A congruence, stored as canonical block ids (blocks numbered by least element).
#[derive(Clone)]
pub struct Congruence {
    host: Arc<FiniteLattice>,
    class: Vec<usize>,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.class == other.class
    }
}

impl Eq for Congruence {}

impl Hash for Congruence {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.class.hash(state);
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Congruence({})", self.render())
    }
}

fn same_host(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Congruence {
    pub fn zero(host: &Arc<FiniteLattice>) -> Self {
        Congruence { host: host.clone(), class: host.elements().collect() }
    }

    pub fn one(host: &Arc<FiniteLattice>) -> Self {
        Congruence { host: host.clone(), class: vec![0; host.len()] }
    }

    /// Validates a partition given as a block id per element.
    pub fn from_classes(host: &Arc<FiniteLattice>, raw: &[usize]) -> Result<Self> {
        if raw.len() != host.len() {
            return Err(Error::ArityMismatch(format!(
                "partition covers {} elements, lattice has {}",
                raw.len(),
                host.len()
            )));
        }
        let class = canonical_classes(raw);
        if let Some((a, b, z)) = compatibility_failure(host, &class) {
            return Err(Error::NotACongruence(format!(
                "`{}` ≡ `{}` but not after operating with `{}`",
                host.label(a),
                host.label(b),
                host.label(z)
            )));
        }
        Ok(Congruence { host: host.clone(), class })
    }

    /// Validates a partition given as blocks of elements.
    pub fn from_blocks(host: &Arc<FiniteLattice>, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; host.len()];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= host.len() {
                    return Err(Error::NotACongruence(format!("element index {x} out of range")));
                }
                if raw[x] != usize::MAX {
                    return Err(Error::NotACongruence(format!("`{}` lies in two blocks", host.label(x))));
                }
                raw[x] = i;
            }
        }
        if let Some(x) = raw.iter().position(|&c| c == usize::MAX) {
            return Err(Error::NotACongruence(format!("`{}` lies in no block", host.label(x))));
        }
        Self::from_classes(host, &raw)
    }

    pub fn host(&self) -> &Arc<FiniteLattice> {
        &self.host
    }

    /// Block id of each element.
    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class[x]
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.class[a] == self.class[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.class.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Blocks in canonical order, each sorted.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &c) in self.class.iter().enumerate() {
            blocks[c].push(x);
        }
        blocks
    }

    pub fn is_zero(&self) -> bool {
        self.num_blocks() == self.class.len()
    }

    pub fn is_one(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Refinement order: every pair identified by `self` is identified by `other`.
    pub fn leq(&self, other: &Congruence) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (x, &c) in self.class.iter().enumerate() {
            let d = other.class[x];
            if image[c] == usize::MAX {
                image[c] = d;
            } else if image[c] != d {
                return false;
            }
        }
        true
    }

    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        if !same_host(&self.host, &other.host) {
            return Err(Error::HostMismatch);
        }
        let mut uf = UnionFind::new(self.class.len());
        let mut first_self = vec![usize::MAX; self.num_blocks()];
        let mut first_other = vec![usize::MAX; other.num_blocks()];
        for x in 0..self.class.len() {
            for (first, c) in [(&mut first_self, self.class[x]), (&mut first_other, other.class[x])] {
                if first[c] == usize::MAX {
                    first[c] = x;
                } else {
                    uf.union(first[c], x);
                }
            }
        }
        // Transitive closure of a union of congruences is already compatible.
        Ok(Congruence { host: self.host.clone(), class: uf.classes() })
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        if !same_host(&self.host, &other.host) {
            return Err(Error::HostMismatch);
        }
        let raw: Vec<usize> = self
            .class
            .iter()
            .zip(&other.class)
            .map(|(&a, &b)| a * other.class.len() + b)
            .collect();
        Ok(Congruence { host: self.host.clone(), class: canonical_classes(&raw) })
    }

    /// `[a,b][c,d]` listing non-singleton blocks; `0` and `1` for the bounds.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.is_one() {
            return "1".into();
        }
        self.blocks()
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| format!("[{}]", b.iter().map(|&x| self.host.label(x)).collect::<Vec<_>>().join(",")))
            .collect()
    }
}

/// First `(a, b, z)` with `a ≡ b` whose meet or join with `z` breaks the partition.
fn compatibility_failure(host: &FiniteLattice, class: &[usize]) -> Option<(Elem, Elem, Elem)> {
    let n = host.len();
    for a in 0..n {
        for b in a + 1..n {
            if class[a] != class[b] {
                continue;
            }
            for z in 0..n {
                if class[host.meet(a, z)] != class[host.meet(b, z)] || class[host.join(a, z)] != class[host.join(b, z)] {
                    return Some((a, b, z));
                }
            }
        }
    }
    None
}

/// Whether the partition with the given block ids is a congruence.
pub fn is_compatible_partition(host: &FiniteLattice, class: &[usize]) -> bool {
    compatibility_failure(host, class).is_none()
}

/// The least congruence identifying `a` and `b`.
pub fn principal_congruence(host: &Arc<FiniteLattice>, a: Elem, b: Elem) -> Congruence {
    generated_congruence(host, [(a, b)])
}

/// The least congruence identifying every given pair.
pub fn generated_congruence(host: &Arc<FiniteLattice>, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Congruence {
    let mut uf = UnionFind::new(host.len());
    close(host, &mut uf, pairs);
    Congruence { host: host.clone(), class: uf.classes() }
}

pub fn congruence_join(a: &Congruence, b: &Congruence) -> Result<Congruence> {
    a.join(b)
}

pub fn congruence_meet(a: &Congruence, b: &Congruence) -> Result<Congruence> {
    a.meet(b)
}

/// `{(x, y) : f(x) = f(y)}`.
pub fn kernel(f: &Homomorphism) -> Congruence {
    Congruence { host: f.source().clone(), class: canonical_classes(f.map()) }
}

/// The quotient lattice and the canonical projection onto it.
///
/// Quotient elements follow the canonical block order. A singleton block
/// keeps its element's label; a larger block is labelled `[a,b,...]`.
pub fn quotient(theta: &Congruence) -> Result<(Arc<FiniteLattice>, Homomorphism)> {
    let host = &theta.host;
    if let Some((a, b, _)) = compatibility_failure(host, &theta.class) {
        return Err(Error::NotACongruence(format!("`{}` ≡ `{}`", host.label(a), host.label(b))));
    }
    let blocks = theta.blocks();
    let k = blocks.len();
    let labels: Vec<String> = blocks
        .iter()
        .map(|b| {
            if b.len() == 1 {
                host.label(b[0]).to_string()
            } else {
                format!("[{}]", b.iter().map(|&x| host.label(x)).collect::<Vec<_>>().join(","))
            }
        })
        .collect();
    let mut meet = vec![0; k * k];
    let mut join = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (blocks[i][0], blocks[j][0]);
            meet[i * k + j] = theta.class[host.meet(a, b)];
            join[i * k + j] = theta.class[host.join(a, b)];
        }
    }
    let q = Arc::new(FiniteLattice::from_tables(format!("{}/~", host.name()), labels, meet, join)?);
    let proj = Homomorphism::new_unchecked(host.clone(), q.clone(), theta.class.clone());
    Ok((q, proj))
}

/// Outcome of the Boolean test on a congruence lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanCheck {
    pub is_boolean: bool,
    /// Indices of the atoms in [`ConLattice::members`].
    pub atoms: Vec<usize>,
    /// Why the lattice is not Boolean, when it is not.
    pub failure: Option<String>,
}

/// All congruences of a lattice, ordered by refinement.
///
/// Members are sorted by rank (number of elements minus number of blocks),
/// then by block ids, so index 0 is the zero congruence and the last index
/// is the full one.
#[derive(Clone)]
pub struct ConLattice {
    host: Arc<FiniteLattice>,
    members: Vec<Congruence>,
    index: HashMap<Vec<usize>, usize>,
    lattice: Arc<FiniteLattice>,
}

impl fmt::Debug for ConLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConLattice")
            .field("host", &self.host.name())
            .field("members", &self.members.iter().map(Congruence::render).collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for ConLattice {
    fn eq(&self, other: &Self) -> bool {
        *self.host == *other.host && self.members == other.members
    }
}

/// The congruence lattice, generated by principal congruences of covers.
pub fn con_lattice(host: &Arc<FiniteLattice>, budget: &Budget) -> Result<ConLattice> {
    if host.len() > budget.max_con_host {
        return Err(Error::BudgetExceeded(format!(
            "congruence lattice of a {}-element lattice (limit {})",
            host.len(),
            budget.max_con_host
        )));
    }
    let principals: Vec<Congruence> =
        par_map(budget.threads, host.covers(), |&(a, b)| principal_congruence(host, a, b));
    join_closure(host, principals, budget)
}

/// Same result, generated from principal congruences of all pairs.
pub fn con_lattice_all_pairs(host: &Arc<FiniteLattice>, budget: &Budget) -> Result<ConLattice> {
    let pairs: Vec<(Elem, Elem)> =
        host.elements().flat_map(|a| host.elements().filter(move |&b| a < b).map(move |b| (a, b))).collect();
    let principals = par_map(budget.threads, &pairs, |&(a, b)| principal_congruence(host, a, b));
    join_closure(host, principals, budget)
}

fn join_closure(host: &Arc<FiniteLattice>, generators: Vec<Congruence>, budget: &Budget) -> Result<ConLattice> {
    let mut gens: Vec<Congruence> = Vec::new();
    for g in generators {
        if !g.is_zero() && !gens.contains(&g) {
            gens.push(g);
        }
    }
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let zero = Congruence::zero(host);
    seen.insert(zero.class.clone(), ());
    let mut all = vec![zero];
    let mut frontier = all.clone();
    while let Some(c) = frontier.pop() {
        for g in &gens {
            let j = c.join(g)?;
            if seen.insert(j.class.clone(), ()).is_none() {
                if all.len() >= budget.max_congruences {
                    return Err(Error::BudgetExceeded(format!("more than {} congruences", budget.max_congruences)));
                }
                all.push(j.clone());
                frontier.push(j);
            }
        }
    }
    ConLattice::from_members(host, all)
}

impl ConLattice {
    /// Builds the lattice view from a complete set of congruences.
    pub fn from_members(host: &Arc<FiniteLattice>, mut members: Vec<Congruence>) -> Result<Self> {
        let n = host.len();
        members.sort_by(|a, b| (n - a.num_blocks(), &a.class).cmp(&(n - b.num_blocks(), &b.class)));
        members.dedup();
        let index: HashMap<Vec<usize>, usize> =
            members.iter().enumerate().map(|(i, c)| (c.class.clone(), i)).collect();
        let m = members.len();
        let mut meet = vec![0; m * m];
        let mut join = vec![0; m * m];
        for i in 0..m {
            for j in i..m {
                let jm = members[i].meet(&members[j])?;
                let jj = members[i].join(&members[j])?;
                let (Some(&a), Some(&b)) = (index.get(&jm.class), index.get(&jj.class)) else {
                    return Err(Error::NotACongruence("member set is not closed".into()));
                };
                meet[i * m + j] = a;
                meet[j * m + i] = a;
                join[i * m + j] = b;
                join[j * m + i] = b;
            }
        }
        let labels = members.iter().map(Congruence::render).collect();
        let lattice = Arc::new(FiniteLattice::from_tables(format!("Con({})", host.name()), labels, meet, join)?);
        Ok(ConLattice { host: host.clone(), members, index, lattice })
    }

    pub fn host(&self) -> &Arc<FiniteLattice> {
        &self.host
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Congruence] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Congruence {
        &self.members[i]
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.index.get(&c.class).copied()
    }

    /// Index of `Θ(a, b)`.
    pub fn principal(&self, a: Elem, b: Elem) -> usize {
        self.index[&principal_congruence(&self.host, a, b).class]
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.members.len() - 1
    }

    /// The congruence lattice as a [`FiniteLattice`]; element `i` is member `i`.
    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.lattice.leq(i, j)
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.lattice.join(i, j)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.lattice.meet(i, j)
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.lattice.atoms()
    }

    pub fn is_distributive(&self) -> bool {
        self.lattice.is_distributive()
    }

    /// Distributive and complemented, with the atoms on success.
    pub fn is_boolean(&self) -> BooleanCheck {
        let l = &self.lattice;
        let atoms = l.atoms();
        if let Some((a, b, c)) = l.distributivity_witness() {
            return BooleanCheck {
                is_boolean: false,
                atoms,
                failure: Some(format!(
                    "not distributive at ({}, {}, {})",
                    l.label(a),
                    l.label(b),
                    l.label(c)
                )),
            };
        }
        for x in l.elements() {
            let complemented = l.elements().any(|y| l.meet(x, y) == l.bottom() && l.join(x, y) == l.top());
            if !complemented {
                return BooleanCheck {
                    is_boolean: false,
                    atoms,
                    failure: Some(format!("`{}` has no complement", l.label(x))),
                };
            }
        }
        BooleanCheck { is_boolean: true, atoms, failure: None }
    }

    /// Index of the least nonzero congruence, if there is exactly one atom
    /// below every nonzero congruence.
    pub fn monolith(&self) -> Option<usize> {
        match self.atoms().as_slice() {
            [a] => Some(*a),
            _ => None,
        }
    }
}

pub fn is_simple(host: &Arc<FiniteLattice>, budget: &Budget) -> Result<bool> {
    Ok(con_lattice(host, budget)?.len() == 2)
}

/// `Conc f` as a map between congruence lattices, by member index.
#[derive(Clone, Debug)]
pub struct ConcMap {
    pub source: Arc<ConLattice>,
    pub target: Arc<ConLattice>,
    pub map: Vec<usize>,
}

impl PartialEq for ConcMap {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.source == *other.source && *self.target == *other.target
    }
}

impl ConcMap {
    pub fn new(source: Arc<ConLattice>, target: Arc<ConLattice>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::ArityMismatch(format!(
                "map has {} entries, source has {} congruences",
                map.len(),
                source.len()
            )));
        }
        if map.iter().any(|&y| y >= target.len()) {
            return Err(Error::ArityMismatch("image index out of range".into()));
        }
        Ok(ConcMap { source, target, map })
    }

    pub fn identity(c: Arc<ConLattice>) -> Self {
        let map = (0..c.len()).collect();
        ConcMap { source: c.clone(), target: c, map }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn preserves_joins(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        (0..s.len()).all(|i| (0..s.len()).all(|j| self.map[s.join(i, j)] == t.join(self.map[i], self.map[j])))
    }

    pub fn preserves_zero(&self) -> bool {
        self.map[self.source.zero()] == self.target.zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() {
            return false;
        }
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true)) && self.preserves_joins()
    }

    /// Only the zero congruence maps to zero.
    pub fn separates_zero(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &y)| (i == self.source.zero()) == (y == self.target.zero()))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ConcMap) -> Result<ConcMap> {
        if *self.target != *g.source {
            return Err(Error::ArityMismatch("composition of non-composable maps".into()));
        }
        let map = self.map.iter().map(|&y| g.map[y]).collect();
        Ok(ConcMap { source: self.source.clone(), target: g.target.clone(), map })
    }

    pub fn inverse(&self) -> Option<ConcMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &y) in self.map.iter().enumerate() {
            inv[y] = i;
        }
        Some(ConcMap { source: self.target.clone(), target: self.source.clone(), map: inv })
    }
}

/// `Conc f` between precomputed congruence lattices of the source and target.
pub fn conc_map_between(f: &Homomorphism, source: &Arc<ConLattice>, target: &Arc<ConLattice>) -> Result<ConcMap> {
    if **f.source() != *source.host || **f.target() != *target.host {
        return Err(Error::HostMismatch);
    }
    let mut map = Vec::with_capacity(source.len());
    for alpha in &source.members {
        let mut first = vec![usize::MAX; alpha.num_blocks()];
        let mut pairs = Vec::new();
        for x in f.source().elements() {
            let c = alpha.class[x];
            if first[c] == usize::MAX {
                first[c] = x;
            } else {
                pairs.push((f.apply(first[c]), f.apply(x)));
            }
        }
        let image = generated_congruence(&target.host, pairs);
        let idx = target
            .index_of(&image)
            .ok_or_else(|| Error::NotACongruence("image congruence missing from target lattice".into()))?;
        map.push(idx);
    }
    Ok(ConcMap { source: source.clone(), target: target.clone(), map })
}

/// `Conc f`, computing both congruence lattices.
pub fn conc_of_hom(f: &Homomorphism, budget: &Budget) -> Result<ConcMap> {
    let s = Arc::new(con_lattice(f.source(), budget)?);
    let t = Arc::new(con_lattice(f.target(), budget)?);
    conc_map_between(f, &s, &t)
}

fn check_chain(b: &FiniteLattice, chain: &[Elem]) -> Result<()> {
    if chain.is_empty() {
        return Err(Error::InvalidChain("empty chain".into()));
    }
    if let Some(&x) = chain.iter().find(|&&x| x >= b.len()) {
        return Err(Error::InvalidChain(format!("element index {x} out of range")));
    }
    if let Some(w) = chain.windows(2).find(|w| !b.lt(w[0], w[1])) {
        return Err(Error::InvalidChain(format!("`{}` is not below `{}`", b.label(w[0]), b.label(w[1]))));
    }
    Ok(())
}

/// The bijection `k ↦ Θ(x_k, x_{k+1})` onto the atoms of a Boolean `con`,
/// if the chain is a congruence chain. Entries are member indices of `con`.
pub fn is_congruence_chain(con: &ConLattice, chain: &[Elem]) -> Result<Option<Vec<usize>>> {
    let check = con.is_boolean();
    if !check.is_boolean {
        return Err(Error::ConNotBoolean);
    }
    check_chain(&con.host, chain)?;
    if chain.len() - 1 != check.atoms.len() {
        return Ok(None);
    }
    let mut sigma = Vec::with_capacity(chain.len() - 1);
    for w in chain.windows(2) {
        let c = con.principal(w[0], w[1]);
        if !check.atoms.contains(&c) || sigma.contains(&c) {
            return Ok(None);
        }
        sigma.push(c);
    }
    Ok(Some(sigma))
}

/// Whether `ξ(Θ_B(x_k, x_{k+1})) = Θ_C(c_k, c_{k+1})` for every step.
///
/// `xi` maps `Con B` to `Con C`, where `c_chain` lists a chain in the host
/// of `xi.target`.
pub fn is_direct_congruence_chain(chain: &[Elem], xi: &ConcMap, c_chain: &[Elem]) -> Result<bool> {
    if chain.len() != c_chain.len() {
        return Err(Error::ArityMismatch(format!(
            "chain has {} elements, reference chain has {}",
            chain.len(),
            c_chain.len()
        )));
    }
    check_chain(&xi.source.host, chain)?;
    check_chain(&xi.target.host, c_chain)?;
    Ok(chain
        .windows(2)
        .zip(c_chain.windows(2))
        .all(|(x, c)| xi.apply(xi.source.principal(x[0], x[1])) == xi.target.principal(c[0], c[1])))
}

/// Whether every congruence of the source of `inclusion` extends uniquely
/// to its target, i.e. `Conc` of the inclusion is an isomorphism.
pub fn is_congruence_preserving_extension(inclusion: &Homomorphism, budget: &Budget) -> Result<bool> {
    if !inclusion.is_injective() {
        return Err(Error::NotASublattice("map is not injective".into()));
    }
    Ok(conc_of_hom(inclusion, budget)?.is_isomorphism())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::lattice::product;
    use crate::sublattice::Sublattice;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    fn e(l: &FiniteLattice, s: &str) -> Elem {
        l.elem(s).unwrap()
    }

    #[test]
    fn principal_examples() {
        let m3 = arc(builtin::m(3));
        assert!(principal_congruence(&m3, 1, 1).is_zero());
        assert!(principal_congruence(&m3, m3.bottom(), m3.top()).is_one());
        assert!(principal_congruence(&m3, e(&m3, "0"), e(&m3, "x1")).is_one());
        let c2 = arc(builtin::chain(2));
        let t = principal_congruence(&c2, e(&c2, "0"), e(&c2, "y1"));
        assert_eq!(t.blocks(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn join_and_meet() {
        let c2 = arc(builtin::chain(2));
        let a = principal_congruence(&c2, 0, 1);
        let b = principal_congruence(&c2, 1, 2);
        assert_eq!(a.join(&Congruence::zero(&c2)).unwrap(), a);
        assert!(a.join(&b).unwrap().is_one());
        let sq = arc(builtin::boolean(2));
        let p = principal_congruence(&sq, e(&sq, "00"), e(&sq, "01"));
        let q = principal_congruence(&sq, e(&sq, "00"), e(&sq, "10"));
        assert!(p.meet(&q).unwrap().is_zero());
        let other = arc(builtin::m(3));
        assert_eq!(a.join(&Congruence::zero(&other)).unwrap_err(), Error::HostMismatch);
    }

    #[test]
    fn from_blocks_validates() {
        let n5 = arc(builtin::n5());
        let ok = Congruence::from_blocks(&n5, &[vec![0], vec![1, 2], vec![3], vec![4]]).unwrap();
        assert_eq!(ok, principal_congruence(&n5, 1, 2));
        let bad = Congruence::from_blocks(&n5, &[vec![0, 1], vec![2], vec![3], vec![4]]);
        assert!(matches!(bad, Err(Error::NotACongruence(_))));
    }

    #[test]
    fn con_lattice_examples() {
        let b = Budget::default();
        for n in 0..=5 {
            let con = con_lattice(&arc(builtin::chain(n)), &b).unwrap();
            assert_eq!(con.len(), 1 << n);
            let check = con.is_boolean();
            assert!(check.is_boolean);
            assert_eq!(check.atoms.len(), n);
        }
        let m3 = con_lattice(&arc(builtin::m(3)), &b).unwrap();
        assert_eq!(m3.len(), 2);
        assert_eq!(m3.is_boolean().atoms.len(), 1);
        let n5 = con_lattice(&arc(builtin::n5()), &b).unwrap();
        assert_eq!(n5.len(), 5);
        assert!(!n5.is_boolean().is_boolean);
        assert!(n5.is_distributive());
    }

    #[test]
    fn covers_generate_everything() {
        let b = Budget::default();
        for l in [builtin::n5(), builtin::f22(), builtin::boolean(3), builtin::m(4)] {
            let l = arc(l);
            assert_eq!(con_lattice(&l, &b).unwrap(), con_lattice_all_pairs(&l, &b).unwrap());
        }
    }

    #[test]
    fn kernel_and_quotient() {
        let two = arc(builtin::two());
        let (sq, proj) = product(&[two.clone(), two], 4096).unwrap();
        assert_eq!(kernel(&proj[0]), principal_congruence(&sq, e(&sq, "00"), e(&sq, "01")));
        let n5 = arc(builtin::n5());
        let (q, p) = quotient(&principal_congruence(&n5, e(&n5, "x1"), e(&n5, "x2"))).unwrap();
        assert!(crate::iso::find_isomorphism(&q, &builtin::boolean(2)).is_some());
        assert!(p.is_surjective());
        let (q1, _) = quotient(&Congruence::one(&n5)).unwrap();
        assert_eq!(q1.len(), 1);
        let (q0, _) = quotient(&Congruence::zero(&n5)).unwrap();
        assert_eq!(*q0, *n5);
    }

    #[test]
    fn conc_examples() {
        let b = Budget::default();
        let c2 = arc(builtin::chain(2));
        let id = conc_of_hom(&Homomorphism::identity(c2.clone()), &b).unwrap();
        assert_eq!(id.map, (0..4).collect::<Vec<_>>());
        let two = arc(builtin::two());
        let f = Homomorphism::new(two, c2.clone(), vec![0, 2]).unwrap();
        let cf = conc_of_hom(&f, &b).unwrap();
        assert_eq!(cf.apply(1), cf.target.one());
        let sq = arc(builtin::boolean(2));
        let g = Homomorphism::new(c2, sq.clone(), vec![0, 1, 3]).unwrap();
        let cg = conc_of_hom(&g, &b).unwrap();
        assert!(cg.is_isomorphism() && cg.separates_zero());
    }

    #[test]
    fn congruence_chain_examples() {
        let b = Budget::default();
        let sq = arc(builtin::boolean(2));
        let con = con_lattice(&sq, &b).unwrap();
        assert!(is_congruence_chain(&con, &[0, 1, 3]).unwrap().is_some());
        assert!(is_congruence_chain(&con, &[0, 3]).unwrap().is_none());
        let c3 = arc(builtin::chain(3));
        let con3 = con_lattice(&c3, &b).unwrap();
        assert!(is_congruence_chain(&con3, &[0, 1, 3]).unwrap().is_none());
        let n5 = con_lattice(&arc(builtin::n5()), &b).unwrap();
        assert_eq!(is_congruence_chain(&n5, &[0, 4]).unwrap_err(), Error::ConNotBoolean);
    }

    #[test]
    fn directness_examples() {
        let b = Budget::default();
        let c2 = arc(builtin::chain(2));
        let con = Arc::new(con_lattice(&c2, &b).unwrap());
        let id = ConcMap::identity(con.clone());
        assert!(is_direct_congruence_chain(&[0, 1, 2], &id, &[0, 1, 2]).unwrap());
        let a = con.principal(0, 1);
        let c = con.principal(1, 2);
        let mut swap: Vec<usize> = (0..con.len()).collect();
        swap.swap(a, c);
        let xi = ConcMap::new(con.clone(), con.clone(), swap).unwrap();
        assert!(xi.is_isomorphism());
        assert!(!is_direct_congruence_chain(&[0, 1, 2], &xi, &[0, 1, 2]).unwrap());
        assert!(matches!(
            is_direct_congruence_chain(&[0, 2], &id, &[0, 1, 2]),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn preserving_extensions() {
        let b = Budget::default();
        let c2 = arc(builtin::chain(2));
        assert!(is_congruence_preserving_extension(&Homomorphism::identity(c2.clone()), &b).unwrap());
        let s = Sublattice::new(&c2, &[0, 2]).unwrap();
        assert!(!is_congruence_preserving_extension(&s.inclusion, &b).unwrap());
        let b3 = arc(builtin::boolean(3));
        let chain = Sublattice::new(&b3, &[0, 1, 3, 7]).unwrap();
        assert!(is_congruence_preserving_extension(&chain.inclusion, &b).unwrap());
    }

    #[test]
    fn simplicity() {
        let b = Budget::default();
        assert!(is_simple(&arc(builtin::m(3)), &b).unwrap());
        assert!(!is_simple(&arc(builtin::n5()), &b).unwrap());
        assert!(is_simple(&arc(builtin::two()), &b).unwrap());
    }
}
