//! Poset-indexed diagrams of finite lattices.
//!
//! A [`LatticeDiagram`] assigns a lattice to every node of a finite poset and
//! a homomorphism to every comparable pair, and is verified to be a functor
//! at construction. Node lattices are either fully tabled or untabled direct
//! products ([`ProductLattice`]), so that large glued diagrams stay usable.

mod build;
mod index;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::budget::{par_map, Budget};
use crate::congruence::{con_lattice, conc_map_between, ConLattice, ConcMap};
use crate::error::{Error, Result};
use crate::lattice::{decode_tuple, encode_tuple, hom_failure, Elem, FiniteLattice, Homomorphism};

pub use build::{
    chain_diagram, chain_diagram_of_partial, directing_diagram, extend_diagram, glued_diagram, isotone_surjections,
    product_over, GluedInfo, ProductDiagram,
};
pub use index::{base_diagram, build_index_posets, ChainSpec, IndexNode, IndexPoset};

/// A finite poset with named nodes.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset").field("nodes", &self.names).finish()
    }
}

impl Poset {
    /// The reflexive-transitive closure of `relations`, which must be antisymmetric.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::PosetMismatch(format!("relation ({a}, {b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(names[i].clone()));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(d) = names.iter().find(|x| !seen.insert(x.as_str())) {
            return Err(Error::DuplicateLabel(d.clone()));
        }
        Ok(Poset { names, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Every comparable pair `i ≤ j`, identities included.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).filter(move |&j| self.leq(i, j)).map(move |j| (i, j))).collect()
    }

    /// Cover pairs of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.pairs()
            .into_iter()
            .filter(|&(i, j)| i != j && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)))
            .collect()
    }

    pub fn is_lower(&self, set: &[usize]) -> bool {
        set.iter().all(|&j| (0..self.len()).all(|i| !self.leq(i, j) || set.contains(&i)))
    }

    /// The induced subposet on `set`, keeping the order of `set`.
    pub fn induced(&self, set: &[usize]) -> Poset {
        let k = set.len();
        let mut leq = vec![false; k * k];
        for (a, &i) in set.iter().enumerate() {
            for (b, &j) in set.iter().enumerate() {
                leq[a * k + b] = self.leq(i, j);
            }
        }
        Poset { names: set.iter().map(|&i| self.names[i].clone()).collect(), leq }
    }

    /// Whether both posets have the same named nodes and order, in any node order.
    pub fn same_up_to_order(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Some(perm): Option<Vec<usize>> = self.names.iter().map(|n| other.index(n)).collect() else {
            return false;
        };
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.leq(i, j) == other.leq(perm[i], perm[j])))
    }
}

/// A direct product kept in factored form; elements are mixed-radix codes
/// with the first factor most significant.
#[derive(Clone)]
pub struct ProductLattice {
    name: String,
    factors: Vec<Arc<FiniteLattice>>,
    sizes: Vec<usize>,
    len: usize,
}

impl fmt::Debug for ProductLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProductLattice({}, {} elements)", self.name, self.len)
    }
}

impl PartialEq for ProductLattice {
    fn eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len() && self.factors.iter().zip(&other.factors).all(|(a, b)| **a == **b)
    }
}

impl ProductLattice {
    pub fn new(factors: Vec<Arc<FiniteLattice>>, cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::ArityMismatch("product of zero factors".into()));
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let len = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).unwrap_or(usize::MAX);
        if len > cap {
            return Err(Error::SizeCapExceeded { size: len, cap });
        }
        let name = factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("×");
        Ok(ProductLattice { name, factors, sizes, len })
    }

    pub fn factors(&self) -> &[Arc<FiniteLattice>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Labels are concatenated when every factor label is one character,
    /// as for tabled products.
    fn compact_labels(&self) -> bool {
        self.factors.iter().all(|f| f.labels().iter().all(|l| l.chars().count() == 1))
    }

    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        decode_tuple(&self.sizes, x)
    }

    pub fn encode(&self, coords: &[Elem]) -> Elem {
        encode_tuple(&self.sizes, coords)
    }

    fn combine(&self, a: Elem, b: Elem, op: impl Fn(&FiniteLattice, Elem, Elem) -> Elem) -> Elem {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let out: Vec<Elem> = self.factors.iter().enumerate().map(|(t, f)| op(f, ca[t], cb[t])).collect();
        self.encode(&out)
    }
}

/// The lattice at a diagram node.
#[derive(Clone, Debug)]
pub enum NodeLattice {
    Table(Arc<FiniteLattice>),
    Product(Arc<ProductLattice>),
}

impl PartialEq for NodeLattice {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (NodeLattice::Table(a), NodeLattice::Table(b)) => **a == **b,
            (NodeLattice::Product(a), NodeLattice::Product(b)) => **a == **b,
            _ => false,
        }
    }
}

impl From<Arc<FiniteLattice>> for NodeLattice {
    fn from(l: Arc<FiniteLattice>) -> Self {
        NodeLattice::Table(l)
    }
}

impl NodeLattice {
    pub fn len(&self) -> usize {
        match self {
            NodeLattice::Table(l) => l.len(),
            NodeLattice::Product(p) => p.len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &str {
        match self {
            NodeLattice::Table(l) => l.name(),
            NodeLattice::Product(p) => &p.name,
        }
    }

    pub fn table(&self) -> Option<&Arc<FiniteLattice>> {
        match self {
            NodeLattice::Table(l) => Some(l),
            NodeLattice::Product(_) => None,
        }
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        match self {
            NodeLattice::Table(l) => l.meet(a, b),
            NodeLattice::Product(p) => p.combine(a, b, |f, x, y| f.meet(x, y)),
        }
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        match self {
            NodeLattice::Table(l) => l.join(a, b),
            NodeLattice::Product(p) => p.combine(a, b, |f, x, y| f.join(x, y)),
        }
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        match self {
            NodeLattice::Table(l) => l.leq(a, b),
            NodeLattice::Product(p) => {
                let (ca, cb) = (p.coords(a), p.coords(b));
                p.factors.iter().enumerate().all(|(t, f)| f.leq(ca[t], cb[t]))
            }
        }
    }

    pub fn bottom(&self) -> Elem {
        match self {
            NodeLattice::Table(l) => l.bottom(),
            NodeLattice::Product(p) => p.encode(&p.factors.iter().map(|f| f.bottom()).collect::<Vec<_>>()),
        }
    }

    pub fn top(&self) -> Elem {
        match self {
            NodeLattice::Table(l) => l.top(),
            NodeLattice::Product(p) => p.encode(&p.factors.iter().map(|f| f.top()).collect::<Vec<_>>()),
        }
    }

    pub fn label(&self, x: Elem) -> String {
        match self {
            NodeLattice::Table(l) => l.label(x).to_string(),
            NodeLattice::Product(p) => {
                let parts: Vec<&str> = p.coords(x).iter().zip(&p.factors).map(|(&c, f)| f.label(c)).collect();
                if p.compact_labels() {
                    parts.concat()
                } else {
                    format!("({})", parts.join(","))
                }
            }
        }
    }

    pub fn elem(&self, label: &str) -> Option<Elem> {
        match self {
            NodeLattice::Table(l) => l.elem(label),
            NodeLattice::Product(p) => {
                let owned: Vec<String>;
                let parts: Vec<&str> = if p.compact_labels() {
                    owned = label.chars().map(String::from).collect();
                    owned.iter().map(String::as_str).collect()
                } else {
                    label.strip_prefix('(')?.strip_suffix(')')?.split(',').collect()
                };
                if parts.len() != p.factors.len() {
                    return None;
                }
                let coords: Option<Vec<Elem>> = parts.iter().zip(&p.factors).map(|(s, f)| f.elem(s)).collect();
                Some(p.encode(&coords?))
            }
        }
    }

    pub fn is_distributive(&self) -> bool {
        match self {
            NodeLattice::Table(l) => l.is_distributive(),
            NodeLattice::Product(p) => p.factors.iter().all(|f| f.is_distributive()),
        }
    }

    pub fn dual(&self) -> NodeLattice {
        match self {
            NodeLattice::Table(l) => NodeLattice::Table(Arc::new(l.dual())),
            NodeLattice::Product(p) => NodeLattice::Product(Arc::new(ProductLattice {
                name: format!("dual({})", p.name),
                factors: p.factors.iter().map(|f| Arc::new(f.dual())).collect(),
                sizes: p.sizes.clone(),
                len: p.len,
            })),
        }
    }

    /// Factor lattices of a product node, or the lattice itself.
    pub fn factors(&self) -> Vec<Arc<FiniteLattice>> {
        match self {
            NodeLattice::Table(l) => vec![l.clone()],
            NodeLattice::Product(p) => p.factors.clone(),
        }
    }
}

/// Exhaustive pair checks above this source size switch to a factorwise check.
const EXHAUSTIVE_HOM_LIMIT: usize = 1024;

/// Checks that `map` is a 0,1-lattice homomorphism from `src` to `tgt`.
pub(crate) fn check_node_hom(src: &NodeLattice, tgt: &NodeLattice, map: &[Elem]) -> std::result::Result<(), String> {
    if map.len() != src.len() {
        return Err(format!("map has {} entries for {} elements", map.len(), src.len()));
    }
    if map.iter().any(|&y| y >= tgt.len()) {
        return Err("image out of range".into());
    }
    if map[src.bottom()] != tgt.bottom() || map[src.top()] != tgt.top() {
        return Err("bounds are not preserved".into());
    }
    if let (NodeLattice::Table(s), NodeLattice::Table(t)) = (src, tgt) {
        return match hom_failure(s, t, map) {
            Some((a, b)) => Err(format!("operations on `{}`, `{}` are not preserved", s.label(a), s.label(b))),
            None => Ok(()),
        };
    }
    if let (NodeLattice::Product(ps), NodeLattice::Product(pt)) = (src, tgt) {
        if src.len() > EXHAUSTIVE_HOM_LIMIT && ps.factors.len() == pt.factors.len() {
            return check_componentwise(ps, pt, map);
        }
    }
    let n = src.len();
    for a in 0..n {
        for b in a..n {
            if map[src.meet(a, b)] != tgt.meet(map[a], map[b]) || map[src.join(a, b)] != tgt.join(map[a], map[b]) {
                return Err(format!("operations on `{}`, `{}` are not preserved", src.label(a), src.label(b)));
            }
        }
    }
    Ok(())
}

/// A map between products is a homomorphism when it acts factor by factor
/// through homomorphisms; anything else is rejected.
fn check_componentwise(ps: &ProductLattice, pt: &ProductLattice, map: &[Elem]) -> std::result::Result<(), String> {
    let k = ps.factors.len();
    let bottoms: Vec<Elem> = ps.factors.iter().map(|f| f.bottom()).collect();
    let mut parts: Vec<Vec<Elem>> = Vec::with_capacity(k);
    for t in 0..k {
        let part = (0..ps.sizes[t])
            .map(|a| {
                let mut c = bottoms.clone();
                c[t] = a;
                pt.coords(map[ps.encode(&c)])[t]
            })
            .collect::<Vec<_>>();
        if let Some((a, b)) = hom_failure(&ps.factors[t], &pt.factors[t], &part) {
            return Err(format!(
                "factor {t} map fails on `{}`, `{}`",
                ps.factors[t].label(a),
                ps.factors[t].label(b)
            ));
        }
        parts.push(part);
    }
    for (x, &y) in map.iter().enumerate() {
        let cx = ps.coords(x);
        let expect: Vec<Elem> = (0..k).map(|t| parts[t][cx[t]]).collect();
        if pt.encode(&expect) != y {
            return Err(format!("map is not factorwise at `{}`", NodeLattice::Product(Arc::new(ps.clone())).label(x)));
        }
    }
    Ok(())
}

/// A diagram of lattices: node lattices plus a map for every `i ≤ j`.
#[derive(Clone, Debug)]
pub struct LatticeDiagram {
    poset: Poset,
    nodes: Vec<NodeLattice>,
    maps: BTreeMap<(usize, usize), Arc<Vec<Elem>>>,
}

impl PartialEq for LatticeDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.nodes == other.nodes && self.maps == other.maps
    }
}

impl LatticeDiagram {
    /// Builds and verifies a diagram. Maps for `i < j` must all be given;
    /// identities are filled in when missing.
    pub fn new(poset: Poset, nodes: Vec<NodeLattice>, mut maps: BTreeMap<(usize, usize), Vec<Elem>>) -> Result<Self> {
        if nodes.len() != poset.len() {
            return Err(Error::ArityMismatch(format!("{} nodes for a {}-node poset", nodes.len(), poset.len())));
        }
        for (i, node) in nodes.iter().enumerate() {
            maps.entry((i, i)).or_insert_with(|| (0..node.len()).collect());
        }
        for &(i, j) in &poset.pairs() {
            if !maps.contains_key(&(i, j)) {
                return Err(Error::NotCommutative(format!("missing map {} -> {}", poset.name(i), poset.name(j))));
            }
        }
        if let Some(&(i, j)) = maps.keys().find(|&&(i, j)| !poset.leq(i, j)) {
            return Err(Error::NotCommutative(format!("map {} -> {} between incomparable nodes", poset.name(i), poset.name(j))));
        }
        let d = LatticeDiagram { poset, nodes, maps: maps.into_iter().map(|(k, v)| (k, Arc::new(v))).collect() };
        d.verify()?;
        Ok(d)
    }

    /// Exhaustive functor check: identities, homomorphisms preserving the
    /// bounds, and `f_{P,R} = f_{Q,R} ∘ f_{P,Q}` for every `P ≤ Q ≤ R`.
    pub fn verify(&self) -> Result<()> {
        self.verify_with(&Budget::default())
    }

    pub fn verify_with(&self, budget: &Budget) -> Result<()> {
        let p = &self.poset;
        for i in 0..p.len() {
            if self.map(i, i).iter().enumerate().any(|(x, &y)| x != y) {
                return Err(Error::NotCommutative(format!("map at {} is not the identity", p.name(i))));
            }
        }
        let pairs: Vec<(usize, usize)> = p.pairs().into_iter().filter(|&(i, j)| i != j).collect();
        let failures = par_map(budget.threads, &pairs, |&(i, j)| {
            check_node_hom(&self.nodes[i], &self.nodes[j], self.map(i, j))
                .err()
                .map(|why| format!("{} -> {}: {why}", p.name(i), p.name(j)))
        });
        if let Some(why) = failures.into_iter().flatten().next() {
            return Err(Error::NotAHomomorphism(why));
        }
        let triples: Vec<(usize, usize, usize)> = pairs
            .iter()
            .flat_map(|&(i, j)| (0..p.len()).filter(move |&k| k != j && p.leq(j, k)).map(move |k| (i, j, k)))
            .collect();
        let failures = par_map(budget.threads, &triples, |&(i, j, k)| {
            let (fij, fjk, fik) = (self.map(i, j), self.map(j, k), self.map(i, k));
            fij.iter()
                .enumerate()
                .find(|&(x, &y)| fjk[y] != fik[x])
                .map(|(x, _)| {
                    format!(
                        "{} -> {} -> {} disagrees with {} -> {} at `{}`",
                        p.name(i),
                        p.name(j),
                        p.name(k),
                        p.name(i),
                        p.name(k),
                        self.nodes[i].label(x)
                    )
                })
        });
        if let Some(why) = failures.into_iter().flatten().next() {
            return Err(Error::NotCommutative(why));
        }
        Ok(())
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn nodes(&self) -> &[NodeLattice] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NodeLattice {
        &self.nodes[i]
    }

    pub fn node_by_name(&self, name: &str) -> Option<&NodeLattice> {
        self.poset.index(name).map(|i| &self.nodes[i])
    }

    /// The map for `i ≤ j`.
    ///
    /// # Panics
    /// If `i ≰ j`.
    pub fn map(&self, i: usize, j: usize) -> &[Elem] {
        &self.maps[&(i, j)]
    }

    pub fn maps(&self) -> impl Iterator<Item = ((usize, usize), &[Elem])> {
        self.maps.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// The map `i → j` as a [`Homomorphism`], when both nodes are tabled.
    pub fn hom(&self, i: usize, j: usize) -> Option<Homomorphism> {
        let (s, t) = (self.nodes[i].table()?, self.nodes[j].table()?);
        Some(Homomorphism::new_unchecked(s.clone(), t.clone(), self.map(i, j).to_vec()))
    }

    /// Restriction to the nodes named in `names`, in that order.
    pub fn restrict(&self, names: &[String]) -> Result<LatticeDiagram> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.poset.index(n).ok_or_else(|| Error::PosetMismatch(format!("no node named `{n}`"))))
            .collect::<Result<_>>()?;
        let poset = self.poset.induced(&idx);
        let nodes = idx.iter().map(|&i| self.nodes[i].clone()).collect();
        let mut maps = BTreeMap::new();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if self.poset.leq(i, j) {
                    maps.insert((a, b), self.maps[&(i, j)].clone());
                }
            }
        }
        Ok(LatticeDiagram { poset, nodes, maps })
    }

    /// Same diagram with nodes listed in the order of `poset`, which must have
    /// the same names and order relation.
    pub fn reindexed(&self, poset: &Poset) -> Result<LatticeDiagram> {
        if !self.poset.same_up_to_order(poset) {
            return Err(Error::PosetMismatch("index posets differ".into()));
        }
        let mut d = self.restrict(poset.names())?;
        d.poset = poset.clone();
        Ok(d)
    }

    /// Nodewise dual lattices with the same maps.
    pub fn dual(&self) -> LatticeDiagram {
        LatticeDiagram {
            poset: self.poset.clone(),
            nodes: self.nodes.iter().map(NodeLattice::dual).collect(),
            maps: self.maps.clone(),
        }
    }

    /// Replaces a single map; used to build corrupted copies in tests.
    pub fn with_map_unchecked(&self, i: usize, j: usize, map: Vec<Elem>) -> LatticeDiagram {
        let mut d = self.clone();
        d.maps.insert((i, j), Arc::new(map));
        d
    }
}

/// Whether the family `components[i]: source_i → target_i` commutes with
/// every map of the two diagrams.
pub fn is_natural(source: &LatticeDiagram, target: &LatticeDiagram, components: &[Vec<Elem>]) -> bool {
    if !source.poset.same_up_to_order(&target.poset) || components.len() != source.poset.len() {
        return false;
    }
    let p = &source.poset;
    p.pairs().into_iter().all(|(i, j)| {
        let ti = target.poset.index(p.name(i)).expect("same names");
        let tj = target.poset.index(p.name(j)).expect("same names");
        let f = source.map(i, j);
        let g = target.map(ti, tj);
        (0..source.nodes[i].len()).all(|x| components[j][f[x]] == g[components[i][x]])
    })
}

/// A diagram of congruence lattices with `Conc` maps.
#[derive(Clone, Debug)]
pub struct SemilatticeDiagram {
    poset: Poset,
    nodes: Vec<Arc<ConLattice>>,
    maps: BTreeMap<(usize, usize), ConcMap>,
}

impl SemilatticeDiagram {
    pub fn new(poset: Poset, nodes: Vec<Arc<ConLattice>>, maps: BTreeMap<(usize, usize), ConcMap>) -> Result<Self> {
        let d = SemilatticeDiagram { poset, nodes, maps };
        d.verify()?;
        Ok(d)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn node(&self, i: usize) -> &Arc<ConLattice> {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Arc<ConLattice>] {
        &self.nodes
    }

    pub fn map(&self, i: usize, j: usize) -> &ConcMap {
        &self.maps[&(i, j)]
    }

    /// Functor laws plus join- and zero-preservation of every map.
    pub fn verify(&self) -> Result<()> {
        let p = &self.poset;
        for (i, j) in p.pairs() {
            let m = self
                .maps
                .get(&(i, j))
                .ok_or_else(|| Error::NotCommutative(format!("missing map {} -> {}", p.name(i), p.name(j))))?;
            if i == j && m.map.iter().enumerate().any(|(x, &y)| x != y) {
                return Err(Error::NotCommutative(format!("map at {} is not the identity", p.name(i))));
            }
            if !m.preserves_joins() || !m.preserves_zero() {
                return Err(Error::NotAHomomorphism(format!("{} -> {}", p.name(i), p.name(j))));
            }
            for k in 0..p.len() {
                if k != j && i != j && p.leq(j, k) {
                    let composed = m.then(&self.maps[&(j, k)])?;
                    if composed.map != self.maps[&(i, k)].map {
                        return Err(Error::NotCommutative(format!(
                            "Conc maps {} -> {} -> {}",
                            p.name(i),
                            p.name(j),
                            p.name(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces a single map; used to build corrupted copies in tests.
    pub fn with_map_unchecked(&self, i: usize, j: usize, map: ConcMap) -> SemilatticeDiagram {
        let mut d = self.clone();
        d.maps.insert((i, j), map);
        d
    }
}

/// `Conc ∘ D`: congruence lattices at every node and `Conc` of every map.
pub fn apply_conc(d: &LatticeDiagram, budget: &Budget) -> Result<SemilatticeDiagram> {
    let tables: Vec<Arc<FiniteLattice>> = d
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.table().cloned().ok_or_else(|| {
                Error::BudgetExceeded(format!(
                    "node {} is an untabled product with {} elements",
                    d.poset.name(i),
                    n.len()
                ))
            })
        })
        .collect::<Result<_>>()?;
    let cons: Vec<Result<ConLattice>> = par_map(budget.threads, &tables, |t| con_lattice(t, budget));
    let nodes: Vec<Arc<ConLattice>> = cons.into_iter().map(|c| c.map(Arc::new)).collect::<Result<_>>()?;
    let mut maps = BTreeMap::new();
    for (i, j) in d.poset.pairs() {
        let h = d.hom(i, j).expect("tabled nodes");
        maps.insert((i, j), conc_map_between(&h, &nodes[i], &nodes[j])?);
    }
    SemilatticeDiagram::new(d.poset.clone(), nodes, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn three_chain() -> LatticeDiagram {
        let poset = Poset::new(names(&["a", "b", "c"]), &[(0, 1), (1, 2)]).unwrap();
        let two = Arc::new(builtin::two());
        let c2 = Arc::new(builtin::chain(2));
        let sq = Arc::new(builtin::boolean(2));
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), vec![0, 2]);
        maps.insert((1, 2), vec![0, 1, 3]);
        maps.insert((0, 2), vec![0, 3]);
        LatticeDiagram::new(poset, vec![two.into(), c2.into(), sq.into()], maps).unwrap()
    }

    #[test]
    fn poset_closure_and_lower_sets() {
        let p = Poset::new(names(&["a", "b", "c"]), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert!(p.is_lower(&[0, 1]));
        assert!(!p.is_lower(&[1]));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert!(Poset::new(names(&["a", "b"]), &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn diagram_verification() {
        let d = three_chain();
        assert_eq!(d.poset().len(), 3);
        let bad = d.with_map_unchecked(0, 2, vec![0, 0]);
        assert!(bad.verify().is_err());
        let bad = d.with_map_unchecked(1, 1, vec![0, 0, 2]);
        assert!(matches!(bad.verify(), Err(Error::NotCommutative(_))));
        let r = d.restrict(&names(&["a", "c"])).unwrap();
        assert_eq!(r.map(0, 1), &[0, 3]);
    }

    #[test]
    fn conc_of_a_diagram() {
        let d = three_chain();
        let s = apply_conc(&d, &Budget::default()).unwrap();
        assert_eq!(s.node(1).len(), 4);
        assert!(s.map(1, 2).is_isomorphism());
        assert!(s.map(0, 1).separates_zero());
    }

    #[test]
    fn product_nodes_behave_like_tables() {
        let m3 = Arc::new(builtin::m(3));
        let p = ProductLattice::new(vec![m3.clone(), m3.clone()], 1 << 20).unwrap();
        let (t, _) = crate::lattice::product(&[m3.clone(), m3], 4096).unwrap();
        let pn = NodeLattice::Product(Arc::new(p));
        for a in 0..25 {
            for b in 0..25 {
                assert_eq!(pn.meet(a, b), t.meet(a, b));
                assert_eq!(pn.join(a, b), t.join(a, b));
                assert_eq!(pn.leq(a, b), t.leq(a, b));
            }
        }
        assert_eq!(pn.elem(&pn.label(7)), Some(7));
        let id: Vec<Elem> = (0..25).collect();
        assert!(check_componentwise(
            match &pn {
                NodeLattice::Product(p) => p,
                _ => unreachable!(),
            },
            match &pn {
                NodeLattice::Product(p) => p,
                _ => unreachable!(),
            },
            &id
        )
        .is_ok());
    }
}
