//! Index posets over a set of chains and the base diagram on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{LatticeDiagram, NodeLattice, Poset};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// A finite chain given by its labels, bottom to top.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainSpec {
    labels: Vec<String>,
}

impl fmt::Debug for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainSpec({})", self.name())
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ChainSpec {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one element".into()));
        }
        let mut seen = BTreeSet::new();
        if let Some(d) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidChain(format!("label `{d}` repeats")));
        }
        Ok(ChainSpec { labels })
    }

    /// The chain `chain[0] < chain[1] < ...` of host elements, by label.
    pub fn from_elems(host: &FiniteLattice, chain: &[usize]) -> Result<Self> {
        if chain.windows(2).any(|w| !host.lt(w[0], w[1])) {
            return Err(Error::InvalidChain(format!("{chain:?} is not strictly increasing")));
        }
        ChainSpec::new(chain.iter().map(|&x| host.label(x).to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Length: one less than the number of elements.
    pub fn lh(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn bottom(&self) -> &str {
        &self.labels[0]
    }

    pub fn top(&self) -> &str {
        self.labels.last().expect("nonempty")
    }

    pub fn name(&self) -> String {
        self.labels.join("<")
    }

    pub fn is_subset_of(&self, other: &ChainSpec) -> bool {
        self.labels.iter().all(|l| other.labels.contains(l))
    }

    /// The chain as a lattice.
    pub fn lattice(&self) -> FiniteLattice {
        FiniteLattice::chain_from_labels(self.name(), self.labels.clone()).expect("distinct labels form a chain")
    }

    /// Host indices of the chain's elements.
    pub fn elems_in(&self, host: &FiniteLattice) -> Result<Vec<usize>> {
        self.labels.iter().map(|l| host.elem_or_err(l)).collect()
    }

    fn sort_key(&self) -> (usize, &[String]) {
        (self.labels.len(), &self.labels)
    }
}

/// Sorts chains canonically: by length, then by labels.
pub(crate) fn canonical_chains(chains: &[ChainSpec]) -> Result<Vec<ChainSpec>> {
    if chains.is_empty() {
        return Err(Error::EmptyChainSet);
    }
    let mut v = chains.to_vec();
    v.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    for w in v.windows(2) {
        if w[0].is_subset_of(&w[1]) && w[1].is_subset_of(&w[0]) {
            return Err(Error::InvalidChain(format!("`{}` is listed twice", w[0])));
        }
    }
    let (b, t) = (v[0].bottom().to_string(), v[0].top().to_string());
    if let Some(c) = v.iter().find(|c| c.bottom() != b || c.top() != t) {
        return Err(Error::InvalidChain(format!("`{c}` does not run from `{b}` to `{t}`")));
    }
    Ok(v)
}

/// A node of `IC`: `∅`, a single chain, an admissible pair, or `⊤`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexNode {
    Empty,
    Single(usize),
    /// Chain indices with the first smaller.
    Pair(usize, usize),
    Top,
}

/// The nested index posets `JC ⊆ KC ⊆ IC` over a set of chains.
///
/// Chains are kept in canonical order. Nodes are listed as `∅`, the single
/// chains, the pairs, then `⊤`; `JC` and `KC` are prefixes of that list.
#[derive(Clone, Debug)]
pub struct IndexPoset {
    chains: Vec<ChainSpec>,
    nodes: Vec<IndexNode>,
    poset: Poset,
    jc: usize,
    kc: usize,
}

/// Pairs `{C, D}` are admissible when both have length 2 or one contains the other.
pub(crate) fn admissible_pair(c: &ChainSpec, d: &ChainSpec) -> bool {
    (c.lh() == 2 && d.lh() == 2) || c.is_subset_of(d) || d.is_subset_of(c)
}

/// Builds `JC`, `KC` and `IC` over `chains`.
pub fn build_index_posets(chains: &[ChainSpec]) -> Result<IndexPoset> {
    let chains = canonical_chains(chains)?;
    let n = chains.len();
    let mut nodes = vec![IndexNode::Empty];
    nodes.extend((0..n).map(IndexNode::Single));
    let jc = nodes.len();
    for i in 0..n {
        for j in i + 1..n {
            if admissible_pair(&chains[i], &chains[j]) {
                nodes.push(IndexNode::Pair(i, j));
            }
        }
    }
    let kc = nodes.len();
    nodes.push(IndexNode::Top);
    let names: Vec<String> = nodes.iter().map(|&p| node_name(&chains, p)).collect();
    let mut rel = Vec::new();
    for (a, &p) in nodes.iter().enumerate() {
        for (b, &q) in nodes.iter().enumerate() {
            if a != b && node_leq(p, q) {
                rel.push((a, b));
            }
        }
    }
    let poset = Poset::new(names, &rel)?;
    Ok(IndexPoset { chains, nodes, poset, jc, kc })
}

fn node_leq(p: IndexNode, q: IndexNode) -> bool {
    use IndexNode::*;
    match (p, q) {
        (_, Top) | (Empty, _) => true,
        (Single(i), Single(j)) => i == j,
        (Single(i), Pair(a, b)) => i == a || i == b,
        (Pair(a, b), Pair(c, d)) => (a, b) == (c, d),
        _ => false,
    }
}

fn node_name(chains: &[ChainSpec], p: IndexNode) -> String {
    match p {
        IndexNode::Empty => "∅".into(),
        IndexNode::Single(i) => format!("{{{}}}", chains[i]),
        IndexNode::Pair(i, j) => format!("{{{},{}}}", chains[i], chains[j]),
        IndexNode::Top => "⊤".into(),
    }
}

impl IndexPoset {
    pub fn chains(&self) -> &[ChainSpec] {
        &self.chains
    }

    pub fn chain_index(&self, c: &ChainSpec) -> Option<usize> {
        self.chains.iter().position(|d| d == c)
    }

    pub fn nodes(&self) -> &[IndexNode] {
        &self.nodes
    }

    /// The order on `IC`.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn node_index(&self, p: IndexNode) -> Option<usize> {
        self.nodes.iter().position(|&q| q == p)
    }

    pub fn name(&self, p: IndexNode) -> String {
        node_name(&self.chains, p)
    }

    pub fn single(&self, c: &ChainSpec) -> Option<usize> {
        self.node_index(IndexNode::Single(self.chain_index(c)?))
    }

    pub fn pair(&self, c: &ChainSpec, d: &ChainSpec) -> Option<usize> {
        let (i, j) = (self.chain_index(c)?, self.chain_index(d)?);
        self.node_index(IndexNode::Pair(i.min(j), i.max(j)))
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Node indices of `JC`.
    pub fn jc(&self) -> Vec<usize> {
        (0..self.jc).collect()
    }

    /// Node indices of `KC`.
    pub fn kc(&self) -> Vec<usize> {
        (0..self.kc).collect()
    }

    pub fn jc_names(&self) -> Vec<String> {
        self.poset.names()[..self.jc].to_vec()
    }

    pub fn kc_names(&self) -> Vec<String> {
        self.poset.names()[..self.kc].to_vec()
    }

    pub fn jc_poset(&self) -> Poset {
        self.poset.induced(&self.jc())
    }

    pub fn kc_poset(&self) -> Poset {
        self.poset.induced(&self.kc())
    }

    pub fn bottom_label(&self) -> &str {
        self.chains[0].bottom()
    }

    pub fn top_label(&self) -> &str {
        self.chains[0].top()
    }
}

/// The two-element lattice on the given bound labels.
pub(crate) fn bounds_lattice(bottom: &str, top: &str) -> FiniteLattice {
    FiniteLattice::chain_from_labels("{0,1}", vec![bottom.to_string(), top.to_string()]).expect("two labels")
}

/// The base diagram `E` over `JC`: `{0,1}` at `∅`, each chain at its own
/// node, and the bounds-preserving maps. With no chains it is the single
/// node `{0,1}`.
pub fn base_diagram(chains: &[ChainSpec]) -> Result<LatticeDiagram> {
    if chains.is_empty() {
        let poset = Poset::new(vec!["∅".into()], &[])?;
        let node = NodeLattice::Table(Arc::new(bounds_lattice("0", "1")));
        return LatticeDiagram::new(poset, vec![node], BTreeMap::new());
    }
    let ip = build_index_posets(chains)?;
    let two = Arc::new(bounds_lattice(ip.bottom_label(), ip.top_label()));
    let mut nodes = vec![NodeLattice::Table(two)];
    let mut maps = BTreeMap::new();
    for (i, c) in ip.chains.iter().enumerate() {
        nodes.push(NodeLattice::Table(Arc::new(c.lattice())));
        maps.insert((0, i + 1), vec![0, c.lh()]);
    }
    LatticeDiagram::new(ip.jc_poset(), nodes, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(labels: &[&str]) -> ChainSpec {
        ChainSpec::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn three_short_chains() {
        let ip = build_index_posets(&[c(&["0", "a", "1"]), c(&["0", "b", "1"]), c(&["0", "c", "1"])]).unwrap();
        assert_eq!(ip.jc().len(), 4);
        assert_eq!(ip.kc().len(), 7);
        assert_eq!(ip.poset().len(), 8);
        assert!(ip.poset().is_lower(&ip.jc()));
    }

    #[test]
    fn single_chain_is_a_three_chain() {
        let ip = build_index_posets(&[c(&["0", "a", "1"])]).unwrap();
        assert_eq!(ip.poset().names(), &["∅", "{0<a<1}", "⊤"]);
        assert_eq!(ip.poset().covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn containment_admits_a_pair() {
        let short = c(&["0", "a", "1"]);
        let long = c(&["0", "a", "b", "1"]);
        let ip = build_index_posets(&[long.clone(), short.clone()]).unwrap();
        assert!(ip.pair(&short, &long).is_some());
        let other = c(&["0", "c", "d", "1"]);
        let ip = build_index_posets(&[long.clone(), other.clone()]).unwrap();
        assert!(ip.pair(&long, &other).is_none());
    }

    #[test]
    fn rejects_empty_and_duplicate_sets() {
        assert_eq!(build_index_posets(&[]).unwrap_err(), Error::EmptyChainSet);
        let a = c(&["0", "a", "1"]);
        assert!(matches!(build_index_posets(&[a.clone(), a]), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn base_diagram_maps_bounds() {
        let e = base_diagram(&[c(&["0", "y1", "1"])]).unwrap();
        assert_eq!(e.poset().len(), 2);
        assert_eq!(e.map(0, 1), &[0, 2]);
        let e = base_diagram(&[]).unwrap();
        assert_eq!(e.poset().len(), 1);
        assert_eq!(e.node(0).len(), 2);
    }
}
