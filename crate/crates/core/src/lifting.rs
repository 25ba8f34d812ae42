//! Liftings of congruence diagrams, congruence chains, and the embedding
//! extracted from a lifting of a chain diagram.
//!
//! A [`Lifting`] pairs a diagram of lattices `B` with a semilattice diagram
//! `S` and per-node isomorphisms `ξ_P: Con B_P → S_P` forming a natural
//! transformation. Only total lattices are handled; each node's distance is
//! the principal congruence `Θ(x, y)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::budget::{par_map, Budget};
use crate::congruence::{con_lattice, conc_map_between, is_congruence_chain, kernel, ConLattice, ConcMap};
use crate::diagram::{apply_conc, ChainSpec, IndexPoset, LatticeDiagram, SemilatticeDiagram};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, Homomorphism};
use crate::sublattice::{chains_between, PartialLattice};

/// A diagram `B` with natural isomorphisms `ξ_P: Con B_P → S_P`.
#[derive(Clone, Debug)]
pub struct Lifting {
    source: LatticeDiagram,
    target: SemilatticeDiagram,
    /// Indexed by source node.
    xi: Vec<ConcMap>,
    /// Target node of each source node, matched by name.
    tnode: Vec<usize>,
}

fn match_nodes(source: &LatticeDiagram, target: &SemilatticeDiagram) -> Result<Vec<usize>> {
    if !source.poset().same_up_to_order(target.poset()) {
        return Err(Error::PosetMismatch("source and target are indexed by different posets".into()));
    }
    Ok(source.poset().names().iter().map(|n| target.poset().index(n).expect("same names")).collect())
}

/// Congruence lattices of the nodes of `d`, which must all be tabled.
fn node_cons(d: &LatticeDiagram, budget: &Budget) -> Result<Vec<Arc<ConLattice>>> {
    let tables: Vec<Arc<FiniteLattice>> = d
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.table()
                .cloned()
                .ok_or_else(|| Error::BudgetExceeded(format!("node {} is not tabled", d.poset().name(i))))
        })
        .collect::<Result<_>>()?;
    par_map(budget.threads, &tables, |t| con_lattice(t, budget).map(Arc::new)).into_iter().collect()
}

/// Identifies `Con(dual B)` with `Con B`: both have the same partitions.
fn dual_identification(from: &Arc<ConLattice>, to: &Arc<ConLattice>) -> Result<ConcMap> {
    let map = from
        .members()
        .iter()
        .map(|c| {
            let twin = crate::congruence::Congruence::from_classes(to.host(), c.classes())?;
            to.index_of(&twin).ok_or_else(|| Error::NotACongruence("dual congruence missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    ConcMap::new(from.clone(), to.clone(), map)
}

impl Lifting {
    /// Assembles a lifting without checking naturality; see [`verify_lifting`].
    pub fn new(source: LatticeDiagram, target: SemilatticeDiagram, xi: Vec<ConcMap>) -> Result<Self> {
        let tnode = match_nodes(&source, &target)?;
        if xi.len() != source.poset().len() {
            return Err(Error::ArityMismatch(format!("{} ξ components for {} nodes", xi.len(), source.poset().len())));
        }
        Ok(Lifting { source, target, xi, tnode })
    }

    /// `B = A` and `ξ = id`.
    pub fn identity(a: &LatticeDiagram, budget: &Budget) -> Result<Self> {
        let target = apply_conc(a, budget)?;
        let xi = target.nodes().iter().map(|c| ConcMap::identity(c.clone())).collect();
        Lifting::new(a.clone(), target, xi)
    }

    /// `B = dual A` nodewise with the same maps, and `ξ` the identification
    /// of `Con(dual A_P)` with `Con A_P`.
    pub fn dual_of(a: &LatticeDiagram, budget: &Budget) -> Result<Self> {
        Lifting::identity(a, budget)?.dualized(budget)
    }

    /// The same lifting with `B` replaced by its nodewise dual.
    pub fn dualized(&self, budget: &Budget) -> Result<Self> {
        let source = self.source.dual();
        let cons = node_cons(&source, budget)?;
        let xi = cons
            .iter()
            .zip(&self.xi)
            .map(|(c, x)| dual_identification(c, &x.source)?.then(x))
            .collect::<Result<_>>()?;
        Lifting::new(source, self.target.clone(), xi)
    }

    pub fn source(&self) -> &LatticeDiagram {
        &self.source
    }

    pub fn target(&self) -> &SemilatticeDiagram {
        &self.target
    }

    pub fn xi(&self, node: usize) -> &ConcMap {
        &self.xi[node]
    }

    pub fn xis(&self) -> &[ConcMap] {
        &self.xi
    }

    /// Source node index by name.
    pub fn node(&self, name: &str) -> Result<usize> {
        self.source.poset().index(name).ok_or_else(|| Error::PosetMismatch(format!("no node named `{name}`")))
    }

    /// The host of `S_P` for source node `i`.
    pub fn target_host(&self, i: usize) -> &Arc<FiniteLattice> {
        self.target.node(self.tnode[i]).host()
    }

    fn table(&self, i: usize) -> Result<&Arc<FiniteLattice>> {
        self.source
            .node(i)
            .table()
            .ok_or_else(|| Error::BudgetExceeded(format!("node {} is not tabled", self.source.poset().name(i))))
    }

    /// Replaces one `ξ` component; used to build corrupted copies.
    pub fn with_xi_unchecked(&self, i: usize, xi: ConcMap) -> Lifting {
        let mut l = self.clone();
        l.xi[i] = xi;
        l
    }

    /// Replaces one map of `B`; used to build corrupted copies.
    pub fn with_source_map_unchecked(&self, i: usize, j: usize, map: Vec<Elem>) -> Lifting {
        let mut l = self.clone();
        l.source = l.source.with_map_unchecked(i, j, map);
        l
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftingFailureKind {
    /// `B` is not a diagram of lattices.
    Diagram,
    /// `ξ_P` is not an isomorphism from `Con B_P` onto `S_P`.
    Xi,
    /// A naturality square does not commute.
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingFailure {
    pub kind: LiftingFailureKind,
    pub from: String,
    pub to: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct LiftingCheck {
    pub valid: bool,
    pub squares_checked: usize,
    /// The first failure in node order.
    pub failure: Option<LiftingFailure>,
}

/// Checks that `B` is a diagram, that each `ξ_P` is an isomorphism from
/// `Con B_P` onto `S_P`, and that `ξ_Q ∘ Conc g_{P,Q} = S_{P,Q} ∘ ξ_P` for
/// every `P ≤ Q`.
pub fn verify_lifting(l: &Lifting, budget: &Budget) -> Result<LiftingCheck> {
    let p = l.source.poset();
    let fail = |kind, from: usize, to: usize, detail: String| LiftingCheck {
        valid: false,
        squares_checked: 0,
        failure: Some(LiftingFailure { kind, from: p.name(from).into(), to: p.name(to).into(), detail }),
    };
    if let Err(e) = l.source.verify_with(budget) {
        return Ok(LiftingCheck {
            valid: false,
            squares_checked: 0,
            failure: Some(LiftingFailure {
                kind: LiftingFailureKind::Diagram,
                from: String::new(),
                to: String::new(),
                detail: e.to_string(),
            }),
        });
    }
    for i in 0..p.len() {
        let x = &l.xi[i];
        if **x.source.host() != **l.table(i)? {
            return Ok(fail(LiftingFailureKind::Xi, i, i, "ξ is not defined on Con B_P".into()));
        }
        if *x.target != **l.target.node(l.tnode[i]) {
            return Ok(fail(LiftingFailureKind::Xi, i, i, "ξ does not land in S_P".into()));
        }
        if !x.is_isomorphism() {
            return Ok(fail(LiftingFailureKind::Xi, i, i, "ξ is not an isomorphism".into()));
        }
    }
    let pairs: Vec<(usize, usize)> = p.pairs().into_iter().filter(|&(i, j)| i != j).collect();
    let results = par_map(budget.threads, &pairs, |&(i, j)| -> Result<Option<String>> {
        let h = Homomorphism::new_unchecked(l.table(i)?.clone(), l.table(j)?.clone(), l.source.map(i, j).to_vec());
        let conc = conc_map_between(&h, &l.xi[i].source, &l.xi[j].source)?;
        let s = l.target.map(l.tnode[i], l.tnode[j]);
        let bad = (0..conc.source.len()).find(|&a| l.xi[j].apply(conc.apply(a)) != s.apply(l.xi[i].apply(a)));
        Ok(bad.map(|a| format!("square fails at {}", conc.source.member(a).render())))
    });
    for (&(i, j), r) in pairs.iter().zip(results) {
        if let Some(detail) = r? {
            return Ok(fail(LiftingFailureKind::Square, i, j, detail));
        }
    }
    Ok(LiftingCheck { valid: true, squares_checked: pairs.len(), failure: None })
}

/// A congruence chain `z_0 < ... < z_n` of a node lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainWitness {
    pub node: String,
    pub chain: Vec<Elem>,
    pub labels: Vec<String>,
    /// `sigma[k]` is the member index of `Θ(z_k, z_{k+1})`, an atom.
    pub sigma: Vec<usize>,
    /// Directness for the relevant `ξ` and reference chain, when known.
    pub direct: Option<bool>,
}

/// Elements of a chain lattice, bottom to top.
fn chain_order(c: &FiniteLattice) -> Result<Vec<Elem>> {
    if !c.is_chain() {
        return Err(Error::InvalidChain(format!("`{}` is not a chain", c.name())));
    }
    let mut v: Vec<Elem> = c.elements().collect();
    v.sort_by_key(|&x| c.height(x));
    Ok(v)
}

/// Every congruence chain of `con.host()` from `u` to `v`, in lexicographic
/// order of element indices.
pub fn find_congruence_chains(con: &ConLattice, u: Elem, v: Elem, budget: &Budget) -> Result<Vec<ChainWitness>> {
    let b = con.host();
    let check = con.is_boolean();
    if !check.is_boolean {
        return Err(Error::ConNotBoolean);
    }
    if !b.leq(u, v) {
        return Err(Error::InvalidChain(format!("`{}` is not below `{}`", b.label(u), b.label(v))));
    }
    let n = check.atoms.len();
    let pool: Vec<Elem> = b.elements().filter(|&x| b.leq(u, x) && b.leq(x, v)).collect();
    let candidates = chains_between(b, &pool, u, v, &[n]);
    if candidates.len() > budget.max_search_nodes {
        return Err(Error::BudgetExceeded(format!("{} candidate chains", candidates.len())));
    }
    let mut out = Vec::new();
    for c in candidates {
        if let Some(sigma) = is_congruence_chain(con, &c)? {
            out.push(ChainWitness {
                node: b.name().to_string(),
                labels: c.iter().map(|&x| b.label(x).to_string()).collect(),
                chain: c,
                sigma,
                direct: None,
            });
        }
    }
    Ok(out)
}

/// Whether `ξ(Θ(z_k, z_{k+1})) = Θ(c_k, c_{k+1})` for the chain `c` of `ξ`'s target host.
fn is_direct(w: &ChainWitness, xi: &ConcMap, c: &[Elem]) -> bool {
    w.chain.len() == c.len()
        && w.sigma.iter().zip(c.windows(2)).all(|(&s, cc)| xi.apply(s) == xi.target.principal(cc[0], cc[1]))
}

/// Congruence chains of node `i` of the lifting between `u` and `v`, each
/// flagged for directness against the target chain `S_P`'s host.
pub fn node_congruence_chains(l: &Lifting, i: usize, u: Elem, v: Elem, budget: &Budget) -> Result<Vec<ChainWitness>> {
    let xi = &l.xi[i];
    let reference = chain_order(xi.target.host())?;
    let mut out = find_congruence_chains(&xi.source, u, v, budget)?;
    for w in &mut out {
        w.node = l.source.poset().name(i).to_string();
        w.direct = Some(is_direct(w, xi, &reference));
    }
    Ok(out)
}

/// Options for [`extract_embedding`].
#[derive(Clone, Debug, Default)]
pub struct ExtractOptions {
    /// Element of `B_∅`; defaults to its bottom.
    pub u: Option<Elem>,
    /// Element of `B_∅`; defaults to its top.
    pub v: Option<Elem>,
    /// Chain to use at the node of a chain, by chain name, instead of the
    /// least direct one.
    pub choices: BTreeMap<String, Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SectionReport {
    fn new(name: &str) -> Self {
        SectionReport { name: name.into(), checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The map `h: K → B_⊤` with the evidence that it is an embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub u: Elem,
    pub v: Elem,
    /// Indexed by element of `K`.
    pub h: Vec<Elem>,
    pub k_labels: Vec<String>,
    pub h_labels: Vec<String>,
    /// The direct chain used at each chain node.
    pub chains: Vec<ChainWitness>,
    /// `injectivity`, `operations`, `congruences`.
    pub sections: Vec<SectionReport>,
    /// Set when the embedding was found in the dual of `B`.
    pub dualized: bool,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(SectionReport::passed)
    }

    pub fn section(&self, name: &str) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// First failing section as an error, if any.
    pub fn ensure(&self) -> Result<()> {
        match self.sections.iter().find(|s| !s.passed()) {
            Some(s) => Err(Error::VerificationFailed { section: s.name.clone(), detail: s.failures[0].clone() }),
            None => Ok(()),
        }
    }
}

struct Extract<'a> {
    l: &'a Lifting,
    index: &'a IndexPoset,
    host: &'a Arc<FiniteLattice>,
    bottom: String,
    top: String,
}

impl Extract<'_> {
    fn chain_node(&self, mids: &[&str]) -> Result<(String, usize)> {
        let mut labels = vec![self.bottom.clone()];
        labels.extend(mids.iter().map(|s| s.to_string()));
        labels.push(self.top.clone());
        let name = ChainSpec::new(labels)?.name();
        let idx = self.l.node(&format!("{{{name}}}"))?;
        Ok((name, idx))
    }

    /// The node of the pair of two chains given by name.
    fn pair_node(&self, a: &str, b: &str) -> Result<usize> {
        let (ca, cb) = (ChainSpec::new(a.split('<'))?, ChainSpec::new(b.split('<'))?);
        let p = self
            .index
            .pair(&ca, &cb)
            .ok_or_else(|| Error::PosetMismatch(format!("no node for the pair {{{a}, {b}}}")))?;
        self.l.node(self.index.poset().name(p))
    }

    fn g(&self, i: usize, j: usize, x: Elem) -> Elem {
        self.l.source.map(i, j)[x]
    }

    fn lt_host(&self, a: &str, b: &str) -> bool {
        let (x, y) = (self.host.elem(a).unwrap(), self.host.elem(b).unwrap());
        self.host.lt(x, y)
    }
}

/// Builds `h: K → B_⊤` from a lifting of the chain diagram of `k` and
/// verifies it; see [`EmbeddingReport`].
///
/// `h(0)` and `h(1)` are the images of `u` and `v`; `h(x)` is the image at
/// `⊤` of the middle element of the chosen direct congruence chain at
/// `{0 < x < 1}`. Fails with `MissingDirectChain` when some chain node has
/// no direct congruence chain between the images of `u` and `v`.
pub fn extract_embedding_report(
    l: &Lifting,
    index: &IndexPoset,
    k: &PartialLattice,
    opts: &ExtractOptions,
    budget: &Budget,
) -> Result<EmbeddingReport> {
    let (host, _) = k.host().ok_or_else(|| Error::PreconditionFailed("partial lattice has no host".into()))?;
    let (Some(k0), Some(k1)) = (k.bottom(), k.top()) else {
        return Err(Error::NotSpanning);
    };
    let e = Extract { l, index, host, bottom: k.label(k0).to_string(), top: k.label(k1).to_string() };
    let empty = l.node("∅")?;
    let top = l.node("⊤")?;
    let b_empty = l.table(empty)?;
    let u = opts.u.unwrap_or(b_empty.bottom());
    let v = opts.v.unwrap_or(b_empty.top());
    if u >= b_empty.len() || v >= b_empty.len() {
        return Err(Error::UnknownLabel("u or v is not an element of B_∅".into()));
    }
    // Direct chains at every chain node.
    let mut chosen: BTreeMap<String, ChainWitness> = BTreeMap::new();
    for c in index.chains() {
        let name = c.name();
        let i = l.node(&format!("{{{name}}}"))?;
        let (cu, cv) = (e.g(empty, i, u), e.g(empty, i, v));
        let reference = chain_order(l.xi[i].target.host())?;
        let witness = match opts.choices.get(&name) {
            Some(chain) => {
                let b = l.table(i)?;
                let sigma = is_congruence_chain(&l.xi[i].source, chain)
                    .ok()
                    .flatten()
                    .filter(|_| chain.first() == Some(&cu) && chain.last() == Some(&cv))
                    .ok_or_else(|| Error::VerificationFailed {
                        section: "chains".into(),
                        detail: format!("given chain at {{{name}}} is not a congruence chain between the extremities"),
                    })?;
                let mut w = ChainWitness {
                    node: l.source.poset().name(i).to_string(),
                    chain: chain.clone(),
                    labels: chain.iter().map(|&x| b.label(x).to_string()).collect(),
                    sigma,
                    direct: None,
                };
                let d = is_direct(&w, &l.xi[i], &reference);
                w.direct = Some(d);
                if !d {
                    return Err(Error::VerificationFailed {
                        section: "chains".into(),
                        detail: format!("given chain at {{{name}}} is not direct"),
                    });
                }
                w
            }
            None => node_congruence_chains(l, i, cu, cv, budget)?
                .into_iter()
                .find(|w| w.direct == Some(true))
                .ok_or_else(|| Error::MissingDirectChain(name.clone()))?,
        };
        chosen.insert(name, witness);
    }
    let n = k.len();
    let b_top = l.table(top)?;
    let mut h = vec![0; n];
    let mut mid_of = vec![None; n];
    for x in 0..n {
        h[x] = if x == k0 {
            e.g(empty, top, u)
        } else if x == k1 {
            e.g(empty, top, v)
        } else {
            let (name, i) = e.chain_node(&[k.label(x)])?;
            let t = chosen[&name].chain[1];
            mid_of[x] = Some((i, t));
            e.g(i, top, t)
        };
    }
    let lab = |x: Elem| k.label(x).to_string();

    let mut inj = SectionReport::new("injectivity");
    for a in 0..n {
        for b in a + 1..n {
            inj.check(h[a] != h[b], || format!("h({}) = h({})", lab(a), lab(b)));
        }
    }

    let mut ops = SectionReport::new("operations");
    for (a, b, c) in k.defined_meets() {
        ops.check(b_top.meet(h[a], h[b]) == h[c], || format!("h({} ∧ {}) ≠ h({}) ∧ h({})", lab(a), lab(b), lab(a), lab(b)));
    }
    for (a, b, c) in k.defined_joins() {
        ops.check(b_top.join(h[a], h[b]) == h[c], || format!("h({} ∨ {}) ≠ h({}) ∨ h({})", lab(a), lab(b), lab(a), lab(b)));
    }
    let mut cong = SectionReport::new("congruences");
    let inner: Vec<Elem> = (0..n).filter(|&x| mid_of[x].is_some()).collect();
    for &x1 in &inner {
        for &x2 in &inner {
            if x1 == x2 {
                continue;
            }
            let (l1, l2) = (k.label(x1), k.label(x2));
            let p = e.pair_node(&e.chain_node(&[l1])?.0, &e.chain_node(&[l2])?.0)?;
            let bp = l.table(p)?;
            let ((i1, t1), (i2, t2)) = (mid_of[x1].unwrap(), mid_of[x2].unwrap());
            let (y1, y2) = (e.g(i1, p, t1), e.g(i2, p, t2));
            let (up, vp) = (e.g(empty, p, u), e.g(empty, p, v));
            let four = [up, vp, y1, y2];
            let distinct = (0..4).all(|a| (a + 1..4).all(|b| four[a] != four[b]));
            ops.check(distinct, || format!("u, v, y({l1}), y({l2}) are not pairwise distinct"));
            let (hx1, hx2) = (host.elem(l1).unwrap(), host.elem(l2).unwrap());
            if host.meet(hx1, hx2) == host.bottom() {
                ops.check(bp.meet(y1, y2) == up, || format!("y({l1}) ∧ y({l2}) ≠ u although {l1} ∧ {l2} = 0"));
            }
            if host.join(hx1, hx2) == host.top() {
                ops.check(bp.join(y1, y2) == vp, || format!("y({l1}) ∨ y({l2}) ≠ v although {l1} ∨ {l2} = 1"));
            }
            if e.lt_host(l1, l2) {
                ops.check(bp.leq(y1, y2), || format!("y({l1}) ≰ y({l2}) although {l1} < {l2}"));
                if let Ok((dname, _)) = e.chain_node(&[l1, l2]) {
                    if let Some(w) = chosen.get(&dname) {
                        for (k_idx, (ik, tk)) in [(1, (i1, t1)), (2, (i2, t2))] {
                            let q = e.pair_node(&e.chain_node(&[if k_idx == 1 { l1 } else { l2 }])?.0, &dname)?;
                            let d_node = l.node(&format!("{{{dname}}}"))?;
                            let lhs = e.g(ik, q, tk);
                            let rhs = e.g(d_node, q, w.chain[k_idx]);
                            ops.check(lhs == rhs, || format!("chain at {{{dname}}} disagrees with y({}) ", k.label(if k_idx == 1 { x1 } else { x2 })));
                        }
                    }
                }
            }
            if x1 < x2 {
                let xi = &l.xi[p];
                let ap = xi.target.host();
                let (a1, a2) = (ap.elem(l1).unwrap(), ap.elem(l2).unwrap());
                cong.check(xi.apply(xi.source.principal(y1, y2)) == xi.target.principal(a1, a2), || {
                    format!("ξ(Θ(y({l1}), y({l2}))) ≠ Θ({l1}, {l2}) at the pair node")
                });
            }
        }
    }
    let xt = &l.xi[top];
    let lt = xt.target.host();
    for a in 0..n {
        for b in a + 1..n {
            let (la, lb) = (lt.elem(k.label(a)), lt.elem(k.label(b)));
            let (Some(la), Some(lb)) = (la, lb) else {
                cong.check(false, || format!("`{}` or `{}` is missing from the top of S", lab(a), lab(b)));
                continue;
            };
            cong.check(xt.apply(xt.source.principal(h[a], h[b])) == xt.target.principal(la, lb), || {
                format!("ξ(Θ(h({}), h({}))) ≠ Θ({}, {})", lab(a), lab(b), lab(a), lab(b))
            });
        }
    }
    Ok(EmbeddingReport {
        u,
        v,
        h_labels: h.iter().map(|&y| b_top.label(y).to_string()).collect(),
        h,
        k_labels: k.labels().to_vec(),
        chains: chosen.into_values().collect(),
        sections: vec![inj, ops, cong],
        dualized: false,
    })
}

/// [`extract_embedding_report`], failing with `VerificationFailed` on the
/// first failing section.
pub fn extract_embedding(
    l: &Lifting,
    index: &IndexPoset,
    k: &PartialLattice,
    opts: &ExtractOptions,
    budget: &Budget,
) -> Result<EmbeddingReport> {
    let r = extract_embedding_report(l, index, k, opts, budget)?;
    r.ensure()?;
    Ok(r)
}

/// Tries the lifting as given, then its dual when a direct chain is missing.
pub fn extract_embedding_either(
    l: &Lifting,
    index: &IndexPoset,
    k: &PartialLattice,
    budget: &Budget,
) -> Result<EmbeddingReport> {
    match extract_embedding(l, index, k, &ExtractOptions::default(), budget) {
        Err(Error::MissingDirectChain(_)) => {
            let mut r = extract_embedding(&l.dualized(budget)?, index, k, &ExtractOptions::default(), budget)?;
            r.dualized = true;
            Ok(r)
        }
        other => other,
    }
}

#[derive(Clone, Debug)]
pub struct DirectingCheck {
    pub holds: bool,
    pub chains_checked: usize,
    pub counterexample: Option<ChainWitness>,
}

/// Checks that every congruence chain at `{c3}` between the images of `u`
/// and `v` is direct, given direct chains at `{c1}` and `{c2}`.
pub fn check_directing_property(
    l: &Lifting,
    c1: &ChainSpec,
    c2: &ChainSpec,
    c3: &ChainSpec,
    u: Elem,
    v: Elem,
    budget: &Budget,
) -> Result<DirectingCheck> {
    let empty = l.node("∅")?;
    let at = |c: &ChainSpec| -> Result<Vec<ChainWitness>> {
        let i = l.node(&format!("{{{c}}}"))?;
        let g = l.source.map(empty, i);
        node_congruence_chains(l, i, g[u], g[v], budget)
    };
    for c in [c1, c2] {
        if !at(c)?.iter().any(|w| w.direct == Some(true)) {
            return Err(Error::HypothesisUnmet(format!("no direct congruence chain at {{{c}}}")));
        }
    }
    let chains = at(c3)?;
    let counterexample = chains.iter().find(|w| w.direct != Some(true)).cloned();
    Ok(DirectingCheck { holds: counterexample.is_none(), chains_checked: chains.len(), counterexample })
}

/// Output of [`retraction_congruence_chain`].
#[derive(Clone, Debug)]
pub struct RetractionChain {
    pub u: Elem,
    /// `v′ = π0(x1)`, the upper end in `A`.
    pub v: Elem,
    /// `f(u) < t1 < f(v′)`.
    pub witness: ChainWitness,
    /// `β0, β1` as member indices of `Con B`: `Θ(f(u), t1) = β0`, `Θ(t1, f(v′)) = β1`.
    pub betas: [usize; 2],
    /// Set when the two retractions were exchanged.
    pub swapped: bool,
}

/// A congruence chain of `B` with extremities in `f(A)`, for a lattice map
/// `f: A → B` retracted by `π0` and `π1` when `Con B` is the four-element
/// Boolean lattice with coatoms `ker π0` and `ker π1`.
pub fn retraction_congruence_chain(
    f: &Homomorphism,
    pi0: &Homomorphism,
    pi1: &Homomorphism,
    budget: &Budget,
) -> Result<RetractionChain> {
    let (a, b) = (f.source().clone(), f.target().clone());
    for (k, pi) in [pi0, pi1].iter().enumerate() {
        if **pi.source() != *b || **pi.target() != *a {
            return Err(Error::HypothesisUnmet(format!("π{k} does not map B to A")));
        }
        if a.elements().any(|x| pi.apply(f.apply(x)) != x) {
            return Err(Error::HypothesisUnmet(format!("π{k} ∘ f is not the identity")));
        }
    }
    let con = con_lattice(&b, budget)?;
    let check = con.is_boolean();
    if !check.is_boolean || check.atoms.len() != 2 {
        return Err(Error::HypothesisUnmet(format!("Con B has {} elements, not four", con.len())));
    }
    let alpha = [pi0, pi1].map(|pi| con.index_of(&kernel(pi)).expect("kernels are congruences"));
    let mut coatoms: Vec<usize> = check.atoms.clone();
    coatoms.sort_unstable();
    let mut ks = alpha.to_vec();
    ks.sort_unstable();
    if coatoms != ks {
        return Err(Error::HypothesisUnmet("the kernels of π0 and π1 are not the coatoms of Con B".into()));
    }
    if a.len() < 2 {
        return Err(Error::HypothesisUnmet("A has no pair u < v".into()));
    }
    let (u, v) = (a.bottom(), a.top());
    let (fu, fv) = (f.apply(u), f.apply(v));
    // β_k is the complement of α_k, that is α_{1-k}.
    let mut beta = [alpha[1], alpha[0]];
    let pool: Vec<Elem> = b.elements().filter(|&x| b.leq(fu, x) && b.leq(x, fv)).collect();
    let lengths: Vec<usize> = (1..=pool.len()).collect();
    let path = chains_between(&b, &pool, fu, fv, &lengths)
        .into_iter()
        .filter(|c| c.windows(2).all(|w| b.is_cover(w[0], w[1])))
        .find(|c| c.windows(2).all(|w| beta.contains(&con.principal(w[0], w[1]))))
        .ok_or_else(|| Error::HypothesisUnmet("no chain from f(u) to f(v) with steps in {β0, β1}".into()))?;
    let x1 = path[1];
    let swapped = con.principal(fu, x1) != beta[0];
    let (p0, p1) = if swapped { (pi1, pi0) } else { (pi0, pi1) };
    if swapped {
        beta.swap(0, 1);
    }
    let v_prime = p0.apply(x1);
    let t1 = b.meet(x1, f.apply(v_prime));
    let fv_prime = f.apply(v_prime);
    let ok = b.lt(fu, t1)
        && b.lt(t1, fv_prime)
        && p1.apply(t1) == u
        && p0.apply(t1) == v_prime
        && con.principal(fu, t1) == beta[0]
        && con.principal(t1, fv_prime) == beta[1];
    if !ok {
        return Err(Error::VerificationFailed { section: "retraction".into(), detail: "constructed chain fails".into() });
    }
    let chain = vec![fu, t1, fv_prime];
    let sigma = is_congruence_chain(&con, &chain)?
        .ok_or_else(|| Error::VerificationFailed { section: "retraction".into(), detail: "not a congruence chain".into() })?;
    Ok(RetractionChain {
        u,
        v: v_prime,
        witness: ChainWitness {
            node: b.name().to_string(),
            labels: chain.iter().map(|&x| b.label(x).to_string()).collect(),
            chain,
            sigma,
            direct: None,
        },
        betas: beta,
        swapped,
    })
}
