//! Constructions of diagrams over index posets: chain diagrams, products
//! over a lower subset, single-chain extension, directing and glued diagrams.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::index::{bounds_lattice, canonical_chains, ChainSpec, IndexNode, IndexPoset};
use super::{build_index_posets, LatticeDiagram, NodeLattice, Poset, ProductLattice};
use crate::budget::Budget;
use crate::builtin;
use crate::error::{Error, Result};
use crate::lattice::{decode_tuple, encode_tuple, product, Elem, FiniteLattice};
use crate::sublattice::{closure_set, partial_spanning_chains, PartialLattice, Sublattice};

/// Builds a diagram whose every node embeds into `host` through `embed`,
/// with inclusion maps between nodes.
fn inclusion_diagram(poset: Poset, nodes: Vec<Arc<FiniteLattice>>, embed: &[Vec<Elem>]) -> Result<LatticeDiagram> {
    let mut maps = BTreeMap::new();
    for (i, j) in poset.pairs() {
        if i == j {
            continue;
        }
        let map = embed[i]
            .iter()
            .map(|x| {
                embed[j].iter().position(|y| y == x).ok_or_else(|| {
                    Error::NotASublattice(format!("node {} is not contained in node {}", poset.name(i), poset.name(j)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        maps.insert((i, j), map);
    }
    LatticeDiagram::new(poset, nodes.into_iter().map(NodeLattice::Table).collect(), maps)
}

/// The chain diagram of `l` over `chains`, each given as host indices from
/// `0` to `1`: `{0,1}` at `∅`, each chain at its node, the generated
/// sublattice at each pair, `l` at `⊤`, and inclusions throughout.
pub fn chain_diagram(l: &Arc<FiniteLattice>, chains: &[Vec<Elem>]) -> Result<(LatticeDiagram, IndexPoset)> {
    let specs: Vec<ChainSpec> = chains
        .iter()
        .map(|c| {
            if c.first() != Some(&l.bottom()) || c.last() != Some(&l.top()) {
                return Err(Error::NotSpanning);
            }
            ChainSpec::from_elems(l, c)
        })
        .collect::<Result<_>>()?;
    let ip = build_index_posets(&specs)?;
    let mut nodes = Vec::new();
    let mut embed = Vec::new();
    for &p in ip.nodes() {
        let (node, emb) = match p {
            IndexNode::Empty => (
                Arc::new(bounds_lattice(l.label(l.bottom()), l.label(l.top()))),
                vec![l.bottom(), l.top()],
            ),
            IndexNode::Single(i) => (Arc::new(ip.chains()[i].lattice()), ip.chains()[i].elems_in(l)?),
            IndexNode::Pair(i, j) => {
                let mut seed = ip.chains()[i].elems_in(l)?;
                seed.extend(ip.chains()[j].elems_in(l)?);
                let sub = Sublattice::new(l, &closure_set(l, &seed))?;
                let name = ip.name(p);
                (Arc::new((*sub.lattice).clone().with_name(name)), sub.elements)
            }
            IndexNode::Top => (l.clone(), l.elements().collect()),
        };
        nodes.push(node);
        embed.push(emb);
    }
    let d = inclusion_diagram(ip.poset().clone(), nodes, &embed)?;
    for i in 0..ip.top() {
        if !d.node(i).is_distributive() {
            return Err(Error::PreconditionFailed(format!("node {} is not distributive", ip.poset().name(i))));
        }
    }
    Ok((d, ip))
}

/// The chain diagram of a spanning partial sublattice `k` in its host:
/// chains are the spanning chains of `k` of length 2 or 3.
pub fn chain_diagram_of_partial(k: &PartialLattice) -> Result<(LatticeDiagram, IndexPoset)> {
    let (host, _) = k.host().ok_or_else(|| Error::PreconditionFailed("partial lattice has no host".into()))?;
    if k.bottom().is_none() || k.top().is_none() {
        return Err(Error::NotSpanning);
    }
    let chains = partial_spanning_chains(k, &[2, 3])?;
    chain_diagram(host, &chains)
}

/// A product diagram with its canonical projections: `projections[t][i]`
/// maps node `i` of the product onto node `i` of the `t`-th factor.
#[derive(Clone, Debug)]
pub struct ProductDiagram {
    pub diagram: LatticeDiagram,
    pub projections: Vec<Vec<Vec<Elem>>>,
}

/// Product of `diagrams` over the lower subset named by `j`.
///
/// Nodes in `j` are shared and must agree across all diagrams. Nodes outside
/// `j` become products: tabled up to `budget.max_product_size` elements,
/// untabled up to `budget.max_node_size`. A single diagram is returned as is.
pub fn product_over(j: &[String], diagrams: &[LatticeDiagram], budget: &Budget) -> Result<ProductDiagram> {
    let first = diagrams.first().ok_or_else(|| Error::ArityMismatch("product of zero diagrams".into()))?;
    let poset = first.poset().clone();
    let n = poset.len();
    let j_idx: Vec<usize> = j
        .iter()
        .map(|name| poset.index(name).ok_or_else(|| Error::PosetMismatch(format!("no node named `{name}`"))))
        .collect::<Result<_>>()?;
    if !poset.is_lower(&j_idx) {
        return Err(Error::NotLowerSubset(j.join(", ")));
    }
    let ds: Vec<LatticeDiagram> = diagrams.iter().map(|d| d.reindexed(&poset)).collect::<Result<_>>()?;
    let shared = first.restrict(j)?;
    for (t, d) in ds.iter().enumerate().skip(1) {
        if d.restrict(j)? != shared {
            return Err(Error::RestrictionMismatch(format!("diagram {t} differs from diagram 0 on the shared nodes")));
        }
    }
    let identity_projections = |d: &LatticeDiagram| -> Vec<Vec<Elem>> {
        (0..n).map(|i| (0..d.node(i).len()).collect()).collect()
    };
    if ds.len() == 1 {
        let projections = vec![identity_projections(&ds[0])];
        return Ok(ProductDiagram { diagram: ds.into_iter().next().unwrap(), projections });
    }
    let in_j: Vec<bool> = (0..n).map(|i| j_idx.contains(&i)).collect();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        if in_j[i] {
            nodes.push(first.node(i).clone());
            continue;
        }
        let total = ds.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.node(i).len())).unwrap_or(usize::MAX);
        if total > budget.max_node_size {
            return Err(Error::SizeCapExceeded { size: total, cap: budget.max_node_size });
        }
        let factors: Vec<Arc<FiniteLattice>> = ds.iter().flat_map(|d| d.node(i).factors()).collect();
        if total <= budget.max_product_size {
            let (p, _) = product(&factors, budget.max_product_size)?;
            nodes.push(NodeLattice::Table(Arc::new((*p).clone().with_name(poset.name(i)))));
        } else {
            nodes.push(NodeLattice::Product(Arc::new(ProductLattice::new(factors, budget.max_node_size)?)));
        }
    }
    let sizes = |i: usize| -> Vec<usize> { ds.iter().map(|d| d.node(i).len()).collect() };
    let mut maps = BTreeMap::new();
    for (a, b) in poset.pairs() {
        if a == b {
            continue;
        }
        let map: Vec<Elem> = match (in_j[a], in_j[b]) {
            (true, true) => first.map(a, b).to_vec(),
            (true, false) => {
                let sb = sizes(b);
                (0..nodes[a].len())
                    .map(|x| encode_tuple(&sb, &ds.iter().map(|d| d.map(a, b)[x]).collect::<Vec<_>>()))
                    .collect()
            }
            (false, false) => {
                let (sa, sb) = (sizes(a), sizes(b));
                (0..nodes[a].len())
                    .map(|x| {
                        let c = decode_tuple(&sa, x);
                        encode_tuple(&sb, &ds.iter().zip(&c).map(|(d, &y)| d.map(a, b)[y]).collect::<Vec<_>>())
                    })
                    .collect()
            }
            (false, true) => unreachable!("lower subsets are closed downwards"),
        };
        maps.insert((a, b), map);
    }
    let diagram = LatticeDiagram::new(poset, nodes, maps)?;
    let projections = (0..ds.len())
        .map(|t| {
            (0..n)
                .map(|i| {
                    if in_j[i] {
                        (0..diagram.node(i).len()).collect()
                    } else {
                        let s = sizes(i);
                        (0..diagram.node(i).len()).map(|x| decode_tuple(&s, x)[t]).collect()
                    }
                })
                .collect()
        })
        .collect();
    Ok(ProductDiagram { diagram, projections })
}

/// Extends `b`, indexed by `IC(old)`, to `IC(new)` one chain at a time.
///
/// Chains of `new` missing from `old` are added in canonical order. Each
/// step puts the new chain `C′` at its node, the old chain `C` at a new pair
/// `{C, C′}`, and uses the collapse `C′ → 2` (everything below the top goes
/// to `0`) to wire the new maps. Both restriction equations are verified.
pub fn extend_diagram(b: &LatticeDiagram, old: &[ChainSpec], new: &[ChainSpec]) -> Result<LatticeDiagram> {
    let old = canonical_chains(old)?;
    let new = canonical_chains(new)?;
    if let Some(c) = old.iter().find(|c| !new.contains(c)) {
        return Err(Error::PreconditionFailed(format!("chain `{c}` is missing from the extended set")));
    }
    let ip = build_index_posets(&old)?;
    let mut cur = b.reindexed(ip.poset())?;
    if cur.restrict(&ip.jc_names())? != super::base_diagram(&old)? {
        return Err(Error::PreconditionFailed("restriction to JC is not the base diagram".into()));
    }
    let mut chains = old.clone();
    for c in new.iter().filter(|c| !old.contains(c)) {
        cur = extend_once(&cur, &chains, c)?;
        chains.push(c.clone());
    }
    let ip_new = build_index_posets(&new)?;
    let out = cur.reindexed(ip_new.poset())?;
    if out.restrict(ip.poset().names())? != b.reindexed(ip.poset())? {
        return Err(Error::PreconditionFailed("extension changed the original diagram".into()));
    }
    if out.restrict(&ip_new.jc_names())? != super::base_diagram(&new)? {
        return Err(Error::PreconditionFailed("extension is not the base diagram on JC".into()));
    }
    Ok(out)
}

fn extend_once(b: &LatticeDiagram, chains: &[ChainSpec], c_new: &ChainSpec) -> Result<LatticeDiagram> {
    let mut all = chains.to_vec();
    all.push(c_new.clone());
    let ip = build_index_posets(&all)?;
    let p = ip.poset();
    let old_idx = |name: &str| b.poset().index(name);
    let new_chain = ip.chain_index(c_new).expect("present");
    let old_top = old_idx("⊤").expect("top");
    let old_empty = old_idx("∅").expect("bottom");
    let collapse: Vec<Elem> = (0..=c_new.lh()).map(|x| usize::from(x == c_new.lh())).collect();
    // The old chain paired with the new one at node `q`, if `q` is such a pair.
    let partner = |q: IndexNode| match q {
        IndexNode::Pair(i, j) if i == new_chain => Some(j),
        IndexNode::Pair(i, j) if j == new_chain => Some(i),
        _ => None,
    };
    let old_single = |i: usize| old_idx(&format!("{{{}}}", ip.chains()[i])).expect("old single");
    let mut nodes = Vec::new();
    for &q in ip.nodes() {
        let node = if let Some(i) = old_idx(&ip.name(q)) {
            b.node(i).clone()
        } else if q == IndexNode::Single(new_chain) {
            NodeLattice::Table(Arc::new(c_new.lattice()))
        } else if let Some(c) = partner(q) {
            b.node(old_single(c)).clone()
        } else {
            unreachable!("every new node is the new chain or a pair with it")
        };
        nodes.push(node);
    }
    let mut maps = BTreeMap::new();
    for (a, z) in p.pairs() {
        if a == z {
            continue;
        }
        let (qa, qz) = (ip.nodes()[a], ip.nodes()[z]);
        let (oa, oz) = (old_idx(p.name(a)), old_idx(p.name(z)));
        let map: Vec<Elem> = if let (Some(x), Some(y)) = (oa, oz) {
            b.map(x, y).to_vec()
        } else if let (Some(c), IndexNode::Top) = (partner(qa), qz) {
            b.map(old_single(c), old_top).to_vec()
        } else if qa == IndexNode::Empty && qz == IndexNode::Single(new_chain) {
            vec![0, c_new.lh()]
        } else if let (IndexNode::Empty, Some(c)) = (qa, partner(qz)) {
            b.map(old_empty, old_single(c)).to_vec()
        } else if let (IndexNode::Single(s), Some(c)) = (qa, partner(qz)) {
            if s == new_chain {
                let e = b.map(old_empty, old_single(c));
                collapse.iter().map(|&x| e[x]).collect()
            } else {
                (0..nodes[a].len()).collect()
            }
        } else if qa == IndexNode::Single(new_chain) && qz == IndexNode::Top {
            let g = b.map(old_empty, old_top);
            collapse.iter().map(|&x| g[x]).collect()
        } else {
            unreachable!("case table covers every new comparable pair")
        };
        maps.insert((a, z), map);
    }
    LatticeDiagram::new(p.clone(), nodes, maps)
}

/// Isotone surjections from the chain with `n` elements onto the chain with
/// `m` elements, as value vectors in lexicographic order.
pub fn isotone_surjections(n: usize, m: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    if n == 0 || m == 0 || m > n {
        return out;
    }
    let mut cur = vec![0];
    fn go(n: usize, m: usize, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        let last = *cur.last().unwrap();
        if cur.len() == n {
            if last == m - 1 {
                out.push(cur.clone());
            }
            return;
        }
        for step in 0..=1 {
            let next = last + step;
            if next < m && m - 1 - next < n - cur.len() {
                cur.push(next);
                go(n, m, cur, out);
                cur.pop();
            }
        }
    }
    go(n, m, &mut cur, &mut out);
    out
}

fn is_m3_or_n5(kgen: &FiniteLattice) -> bool {
    let names = ["0", "x1", "x2", "x3", "1"];
    if kgen.len() != 5 || names.iter().any(|l| kgen.elem(l).is_none()) {
        return false;
    }
    [builtin::m(3), builtin::n5()].iter().any(|r| {
        names.iter().all(|a| {
            names
                .iter()
                .all(|b| kgen.leq(kgen.elem(a).unwrap(), kgen.elem(b).unwrap()) == r.leq(r.elem(a).unwrap(), r.elem(b).unwrap()))
        })
    })
}

/// The directing diagram over `IC({c1, c2, c3})`.
///
/// `kgen` must be `M3` or `N5` labelled `0, x1, x2, x3, 1`; `c1` and `c2`
/// have length 2 and `c3` has length 2 or contains both. For each isotone
/// surjection `t` of `c3` onto `{0, x3, 1}` a diagram is built with
/// `{0, xi, xj, 1}` at the pairs, `kgen` at `⊤`, inclusions everywhere and
/// `t` on the maps leaving `{c3}`; the result is their product over `JC`.
pub fn directing_diagram(
    kgen: &Arc<FiniteLattice>,
    c1: &ChainSpec,
    c2: &ChainSpec,
    c3: &ChainSpec,
    budget: &Budget,
) -> Result<LatticeDiagram> {
    if !is_m3_or_n5(kgen) {
        return Err(Error::BadChainShapes(format!("`{}` is not M3 or N5 labelled 0,x1,x2,x3,1", kgen.name())));
    }
    if c1.lh() != 2 || c2.lh() != 2 {
        return Err(Error::BadChainShapes("the first two chains must have length 2".into()));
    }
    if c1 == c2 || c1 == c3 || c2 == c3 {
        return Err(Error::BadChainShapes("chains must be distinct".into()));
    }
    if c3.lh() != 2 && !(c1.is_subset_of(c3) && c2.is_subset_of(c3)) {
        return Err(Error::BadChainShapes(format!("`{c3}` has length {} but does not contain both", c3.lh())));
    }
    let roles = [c1, c2, c3];
    let ip = build_index_posets(&[c1.clone(), c2.clone(), c3.clone()])?;
    // Role (1, 2 or 3) of each canonical chain.
    let role: Vec<usize> = ip.chains().iter().map(|c| roles.iter().position(|r| *r == c).unwrap() + 1).collect();
    let x = |r: usize| kgen.elem(&format!("x{r}")).expect("checked labels");
    let (k0, k1) = (kgen.bottom(), kgen.top());
    let two = Arc::new(bounds_lattice(ip.bottom_label(), ip.top_label()));
    let mut nodes = Vec::new();
    let mut embed: Vec<Option<Vec<Elem>>> = Vec::new();
    for &p in ip.nodes() {
        match p {
            IndexNode::Empty => {
                nodes.push(NodeLattice::Table(two.clone()));
                embed.push(Some(vec![k0, k1]));
            }
            IndexNode::Single(i) => {
                nodes.push(NodeLattice::Table(Arc::new(ip.chains()[i].lattice())));
                embed.push((role[i] != 3).then(|| vec![k0, x(role[i]), k1]));
            }
            IndexNode::Pair(i, j) => {
                let sub = Sublattice::new(kgen, &[k0, x(role[i]), x(role[j]), k1])?;
                nodes.push(NodeLattice::Table(Arc::new((*sub.lattice).clone().with_name(ip.name(p)))));
                embed.push(Some(sub.elements));
            }
            IndexNode::Top => {
                nodes.push(NodeLattice::Table(kgen.clone()));
                embed.push(Some(kgen.elements().collect()));
            }
        }
    }
    let c3_node = embed.iter().position(Option::is_none).expect("c3 node");
    let d3 = [k0, x(3), k1];
    let p = ip.poset();
    let mut factors = Vec::new();
    for t in isotone_surjections(c3.lh() + 1, 3) {
        let mut maps = BTreeMap::new();
        for (a, b) in p.pairs() {
            if a == b {
                continue;
            }
            let map: Vec<Elem> = if b == c3_node {
                vec![0, c3.lh()]
            } else {
                let eb = embed[b].as_ref().expect("only the c3 node lacks an embedding");
                let pos = |v: Elem| eb.iter().position(|&y| y == v).expect("contained");
                match &embed[a] {
                    None => t.iter().map(|&s| pos(d3[s])).collect(),
                    Some(ea) => ea.iter().map(|&v| pos(v)).collect(),
                }
            };
            maps.insert((a, b), map);
        }
        factors.push(LatticeDiagram::new(p.clone(), nodes.clone(), maps)?);
    }
    Ok(product_over(&ip.jc_names(), &factors, budget)?.diagram)
}

/// The glued diagram of a partial sublattice and its bookkeeping.
#[derive(Clone, Debug)]
pub struct GluedInfo {
    pub diagram: LatticeDiagram,
    pub index: IndexPoset,
    /// Admissible triples `(C1, C2, D)`, in the order of the product factors
    /// after the chain diagram.
    pub triples: Vec<(ChainSpec, ChainSpec, ChainSpec)>,
    /// Number of copies of `kgen` at `⊤` contributed by each triple.
    pub factor_counts: Vec<usize>,
}

/// Glues the chain diagram of `k` in its host with one extended directing
/// diagram per admissible triple, as a product over `JC`.
///
/// A triple `(C1, C2, D)` is admissible when `C1 ≠ C2` have length 2,
/// `D ∉ {C1, C2}`, and `D` has length 2 or contains both.
pub fn glued_diagram(k: &PartialLattice, kgen: &Arc<FiniteLattice>, budget: &Budget) -> Result<GluedInfo> {
    if k.len() < 5 {
        return Err(Error::TooFewElements(k.len()));
    }
    let (a0, index) = chain_diagram_of_partial(k)?;
    let chains = index.chains().to_vec();
    let mut triples = Vec::new();
    for c1 in chains.iter().filter(|c| c.lh() == 2) {
        for c2 in chains.iter().filter(|c| c.lh() == 2 && *c != c1) {
            for d in chains.iter().filter(|d| *d != c1 && *d != c2) {
                if d.lh() == 2 || (c1.is_subset_of(d) && c2.is_subset_of(d)) {
                    triples.push((c1.clone(), c2.clone(), d.clone()));
                }
            }
        }
    }
    let mut parts = vec![a0];
    let mut factor_counts = Vec::new();
    for (c1, c2, d) in &triples {
        let h = directing_diagram(kgen, c1, c2, d, budget)?;
        factor_counts.push(h.node(h.poset().len() - 1).factors().len());
        let ext = extend_diagram(&h, &[c1.clone(), c2.clone(), d.clone()], &chains)?;
        parts.push(ext.reindexed(index.poset())?);
    }
    let diagram = product_over(&index.jc_names(), &parts, budget)?.diagram;
    Ok(GluedInfo { diagram, index, triples, factor_counts })
}
