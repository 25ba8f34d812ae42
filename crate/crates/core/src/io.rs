//! JSON formats for lattices, congruences, diagrams, liftings and reports.
//!
//! Every document written here carries `"schema": 1`. Readers accept the
//! field's absence but reject any other version.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::builtin;
use crate::congruence::{ConLattice, ConcMap, Congruence};
use crate::critpoint::{ConcClassReport, CritVerdict};
use crate::diagram::{apply_conc, LatticeDiagram, NodeLattice, Poset, ProductLattice};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::lifting::{ChainWitness, DirectingCheck, EmbeddingReport, Lifting, LiftingCheck, RetractionChain};
use crate::variety::{HSWitness, SIQuotient, SiPairClass, VarLeq};

pub const SCHEMA: u64 = 1;

fn check_schema(schema: Option<u64>) -> Result<()> {
    match schema {
        None | Some(SCHEMA) => Ok(()),
        Some(s) => Err(Error::Parse(format!("unsupported schema version {s}"))),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u64>,
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl LatticeFile {
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        LatticeFile {
            schema: Some(SCHEMA),
            name: l.name().to_string(),
            elements: l.labels().to_vec(),
            covers: l.covers().iter().map(|&(a, b)| (l.label(a).to_string(), l.label(b).to_string())).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        check_schema(self.schema)?;
        FiniteLattice::from_covers(self.name.clone(), self.elements.clone(), &self.covers)
    }
}

pub fn lattice_from_str(s: &str) -> Result<FiniteLattice> {
    serde_json::from_str::<LatticeFile>(s)?.to_lattice()
}

pub fn lattice_to_string(l: &FiniteLattice) -> String {
    serde_json::to_string_pretty(&LatticeFile::from_lattice(l)).expect("serializable")
}

/// A builtin generator name (`2`, `chain:n`, `M:n`, `N5`, `bool:n`, `F22`)
/// or the path of a lattice file.
pub fn load_lattice(spec: &str) -> Result<FiniteLattice> {
    if let Some(b) = builtin::parse(spec) {
        return b;
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Io(format!("`{spec}` is neither a builtin lattice nor a readable file")));
    }
    lattice_from_str(&std::fs::read_to_string(path)?)
}

/// Blocks of `theta` as sorted label lists, ordered by least element.
pub fn congruence_blocks(theta: &Congruence) -> Vec<Vec<String>> {
    let host = theta.host();
    theta
        .blocks()
        .into_iter()
        .map(|b| {
            let mut v: Vec<String> = b.into_iter().map(|x| host.label(x).to_string()).collect();
            v.sort();
            v
        })
        .collect()
}

pub fn congruence_from_blocks(host: &Arc<FiniteLattice>, blocks: &[Vec<String>]) -> Result<Congruence> {
    let elems = blocks
        .iter()
        .map(|b| b.iter().map(|s| host.elem_or_err(s)).collect::<Result<Vec<Elem>>>())
        .collect::<Result<Vec<_>>>()?;
    Congruence::from_blocks(host, &elems)
}

/// A node lattice in a diagram file: a builtin name, an inline lattice, or a
/// product of either.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Builtin(String),
    Product { product: Vec<LatticeRef> },
    Inline(LatticeFile),
}

impl LatticeRef {
    fn resolve(&self) -> Result<Arc<FiniteLattice>> {
        match self {
            LatticeRef::Builtin(name) => builtin::parse(name)
                .unwrap_or_else(|| Err(Error::Parse(format!("unknown builtin lattice `{name}`"))))
                .map(Arc::new),
            LatticeRef::Inline(f) => f.to_lattice().map(Arc::new),
            LatticeRef::Product { .. } => Err(Error::Parse("nested products are not supported".into())),
        }
    }

    fn to_node(&self, budget: &Budget) -> Result<NodeLattice> {
        match self {
            LatticeRef::Product { product } => {
                let factors = product.iter().map(LatticeRef::resolve).collect::<Result<Vec<_>>>()?;
                Ok(NodeLattice::Product(Arc::new(ProductLattice::new(factors, budget.max_node_size)?)))
            }
            other => Ok(NodeLattice::Table(other.resolve()?)),
        }
    }

    fn of_node(n: &NodeLattice) -> Self {
        match n {
            NodeLattice::Table(l) => LatticeRef::Inline(LatticeFile { schema: None, ..LatticeFile::from_lattice(l) }),
            NodeLattice::Product(p) => LatticeRef::Product {
                product: p
                    .factors()
                    .iter()
                    .map(|f| LatticeRef::Inline(LatticeFile { schema: None, ..LatticeFile::from_lattice(f) }))
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetFile {
    pub nodes: Vec<String>,
    pub leq: Vec<(String, String)>,
}

/// Maps are given for at least the covering pairs of the poset; the rest are
/// composed along covers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u64>,
    pub poset: PosetFile,
    pub lattices: BTreeMap<String, LatticeRef>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl DiagramFile {
    /// Writes the covering maps only.
    pub fn from_diagram(d: &LatticeDiagram) -> Self {
        let p = d.poset();
        let covers = p.covers();
        let mut maps = BTreeMap::new();
        for &(i, j) in &covers {
            let (a, b) = (d.node(i), d.node(j));
            let m = d.map(i, j);
            let entries = (0..a.len()).map(|x| (a.label(x), b.label(m[x]))).collect();
            maps.insert(format!("{}<={}", p.name(i), p.name(j)), entries);
        }
        DiagramFile {
            schema: Some(SCHEMA),
            poset: PosetFile {
                nodes: p.names().to_vec(),
                leq: covers.iter().map(|&(i, j)| (p.name(i).to_string(), p.name(j).to_string())).collect(),
            },
            lattices: p.names().iter().cloned().zip(d.nodes().iter().map(LatticeRef::of_node)).collect(),
            maps,
        }
    }

    pub fn to_diagram(&self, budget: &Budget) -> Result<LatticeDiagram> {
        check_schema(self.schema)?;
        let names = self.poset.nodes.clone();
        let idx = |s: &str| {
            names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownLabel(format!("poset node `{s}`")))
        };
        let rel = self.poset.leq.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        let poset = Poset::new(names.clone(), &rel)?;
        let nodes = names
            .iter()
            .map(|n| {
                self.lattices
                    .get(n)
                    .ok_or_else(|| Error::Parse(format!("no lattice for node `{n}`")))?
                    .to_node(budget)
                    .map(|node| rename(node, n))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut given: BTreeMap<(usize, usize), Vec<Elem>> = BTreeMap::new();
        for (key, entries) in &self.maps {
            let (a, b) = key.split_once("<=").ok_or_else(|| Error::Parse(format!("bad map key `{key}`")))?;
            let (i, j) = (idx(a)?, idx(b)?);
            if !poset.leq(i, j) {
                return Err(Error::Parse(format!("map `{key}` goes against the order")));
            }
            let (src, tgt) = (&nodes[i], &nodes[j]);
            let mut m = vec![usize::MAX; src.len()];
            for (x, y) in entries {
                let x = src.elem(x).ok_or_else(|| Error::UnknownLabel(format!("`{x}` in node `{a}`")))?;
                let y = tgt.elem(y).ok_or_else(|| Error::UnknownLabel(format!("`{y}` in node `{b}`")))?;
                m[x] = y;
            }
            if let Some(x) = m.iter().position(|&y| y == usize::MAX) {
                return Err(Error::Parse(format!("map `{key}` misses `{}`", src.label(x))));
            }
            given.insert((i, j), m);
        }
        let n = poset.len();
        let mut maps = given.clone();
        // Compose a given map out of `i` with a finished map above it, upper nodes first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| poset.leq(i, j)).count());
        for &i in &order {
            for j in 0..n {
                if i == j || !poset.leq(i, j) || maps.contains_key(&(i, j)) {
                    continue;
                }
                let k = (0..n)
                    .find(|&k| k != i && given.contains_key(&(i, k)) && maps.contains_key(&(k, j)))
                    .ok_or_else(|| Error::Parse(format!("no map from `{}` to `{}`", poset.name(i), poset.name(j))))?;
                let h = given[&(i, k)].iter().map(|&x| maps[&(k, j)][x]).collect();
                maps.insert((i, j), h);
            }
        }
        LatticeDiagram::new(poset, nodes, maps)
    }
}

fn rename(node: NodeLattice, name: &str) -> NodeLattice {
    match node {
        NodeLattice::Table(l) if l.name() != name => NodeLattice::Table(Arc::new((*l).clone().with_name(name))),
        other => other,
    }
}

pub fn diagram_from_str(s: &str, budget: &Budget) -> Result<LatticeDiagram> {
    serde_json::from_str::<DiagramFile>(s)?.to_diagram(budget)
}

pub fn diagram_to_string(d: &LatticeDiagram) -> String {
    serde_json::to_string_pretty(&DiagramFile::from_diagram(d)).expect("serializable")
}

/// A congruence given by a pair whose principal congruence it is.
type PairRef = (String, String);

/// `B`, the diagram `A` with `S = Conc ∘ A`, and each `ξ_P` given on the
/// join-irreducible congruences of `B_P`, which are the atoms when `Con B_P`
/// is Boolean. Each congruence is named by a covering pair generating it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftingFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u64>,
    pub source: DiagramFile,
    pub target: DiagramFile,
    pub xi: BTreeMap<String, Vec<(PairRef, PairRef)>>,
}

/// Join-irreducible members of `con`, each with a covering pair generating it.
fn join_irreducibles(con: &ConLattice) -> Vec<(usize, (Elem, Elem))> {
    let host = con.host();
    let lat = con.lattice();
    (0..con.len())
        .filter(|&i| lat.lower_covers(i).count() == 1)
        .map(|i| {
            let pair = host.covers().iter().copied().find(|&(a, b)| con.principal(a, b) == i).expect("join-irreducible congruences are principal on covers");
            (i, pair)
        })
        .collect()
}

fn pair_ref(host: &FiniteLattice, (a, b): (Elem, Elem)) -> PairRef {
    (host.label(a).to_string(), host.label(b).to_string())
}

impl LiftingFile {
    pub fn from_lifting(l: &Lifting, target: &LatticeDiagram) -> Self {
        let p = l.source().poset();
        let mut xi = BTreeMap::new();
        for i in 0..p.len() {
            let x = l.xi(i);
            let (sh, th) = (x.source.host(), x.target.host());
            let entries = join_irreducibles(&x.source)
                .into_iter()
                .map(|(j, pair)| {
                    let img = x.apply(j);
                    let tpair = th
                        .covers()
                        .iter()
                        .copied()
                        .find(|&(a, b)| x.target.principal(a, b) == img)
                        .or_else(|| {
                            th.elements()
                                .flat_map(|a| th.elements().map(move |b| (a, b)))
                                .find(|&(a, b)| th.leq(a, b) && x.target.principal(a, b) == img)
                        })
                        .expect("every congruence of a finite lattice is a join of principal ones");
                    (pair_ref(sh, pair), pair_ref(th, tpair))
                })
                .collect();
            xi.insert(p.name(i).to_string(), entries);
        }
        LiftingFile {
            schema: Some(SCHEMA),
            source: DiagramFile::from_diagram(l.source()),
            target: DiagramFile::from_diagram(target),
            xi,
        }
    }

    /// The lifting and the diagram `A` it lifts.
    pub fn to_lifting(&self, budget: &Budget) -> Result<(Lifting, LatticeDiagram)> {
        check_schema(self.schema)?;
        let b = self.source.to_diagram(budget)?;
        let a = self.target.to_diagram(budget)?;
        let s = apply_conc(&a, budget)?;
        let bs = apply_conc(&b, budget)?;
        let p = b.poset();
        let mut xis = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            let name = p.name(i);
            let src = bs.node(i).clone();
            let ti = s.poset().index(name).ok_or_else(|| Error::PosetMismatch(format!("node `{name}` missing from target")))?;
            let tgt = s.node(ti).clone();
            let entries = self.xi.get(name).ok_or_else(|| Error::Parse(format!("no ξ for node `{name}`")))?;
            let (sh, th) = (src.host().clone(), tgt.host().clone());
            let mut on_ji: BTreeMap<usize, usize> = BTreeMap::new();
            for ((a, b), (c, d)) in entries {
                let from = src.principal(sh.elem_or_err(a)?, sh.elem_or_err(b)?);
                let to = tgt.principal(th.elem_or_err(c)?, th.elem_or_err(d)?);
                on_ji.insert(from, to);
            }
            let ji = join_irreducibles(&src);
            if let Some((_, pair)) = ji.iter().find(|(j, _)| !on_ji.contains_key(j)) {
                let (x, y) = pair_ref(&sh, *pair);
                return Err(Error::Parse(format!("ξ at `{name}` is missing Θ({x},{y})")));
            }
            let map = (0..src.len())
                .map(|m| {
                    ji.iter()
                        .filter(|(j, _)| src.leq(*j, m))
                        .fold(tgt.zero(), |acc, (j, _)| tgt.join(acc, on_ji[j]))
                })
                .collect();
            xis.push(ConcMap::new(src, tgt, map)?);
        }
        Ok((Lifting::new(b, s, xis)?, a))
    }
}

pub fn lifting_from_str(s: &str, budget: &Budget) -> Result<(Lifting, LatticeDiagram)> {
    serde_json::from_str::<LiftingFile>(s)?.to_lifting(budget)
}

pub fn lifting_to_string(l: &Lifting, target: &LatticeDiagram) -> String {
    serde_json::to_string_pretty(&LiftingFile::from_lifting(l, target)).expect("serializable")
}

/// Adds `"schema": 1` to a JSON object.
pub fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

pub fn lattice_json(l: &FiniteLattice) -> Value {
    json!({
        "name": l.name(),
        "elements": l.labels(),
        "covers": l.covers().iter().map(|&(a, b)| [l.label(a), l.label(b)]).collect::<Vec<_>>(),
    })
}

pub fn si_quotient_json(q: &SIQuotient) -> Value {
    json!({
        "theta": congruence_blocks(&q.theta),
        "quotient": lattice_json(&q.quotient),
        "monolith": congruence_blocks(&q.monolith),
    })
}

/// `m` is the lattice the witness proves to lie in `HS(l)`.
pub fn hs_witness_json(w: &HSWitness, m: &FiniteLattice, l: &FiniteLattice) -> Value {
    let blocks = w.theta.blocks();
    let iso: BTreeMap<String, String> = blocks
        .iter()
        .zip(&w.iso)
        .map(|(b, &y)| (w.sub.label(b[0]).to_string(), m.label(y).to_string()))
        .collect();
    json!({
        "sublattice": w.sublattice.iter().map(|&x| l.label(x)).collect::<Vec<_>>(),
        "theta": congruence_blocks(&w.theta),
        "iso": iso,
    })
}

pub fn var_leq_json(r: &VarLeq, l: &FiniteLattice) -> Value {
    json!({
        "holds": r.holds,
        "certificates": r.witnesses.iter().map(|(q, w)| json!({
            "si_quotient": si_quotient_json(q),
            "witness": hs_witness_json(w, &q.quotient, l),
        })).collect::<Vec<_>>(),
        "failing": r.failing.as_ref().map(si_quotient_json),
    })
}

pub fn crit_verdict_json(v: &CritVerdict, l: &FiniteLattice) -> Value {
    let dual_l = l.dual();
    json!({
        "verdict": v.verdict.as_str(),
        "var_leq": var_leq_json(&v.plain, l),
        "var_leq_dual": var_leq_json(&v.dual, &dual_l),
        "separating": v.separating.as_ref().map(si_quotient_json),
        "justification": v.justification,
    })
}

pub fn si_class_str(c: &SiPairClass) -> String {
    match c {
        SiPairClass::Isomorphic => "Isomorphic".into(),
        SiPairClass::DuallyIsomorphic => "DuallyIsomorphic".into(),
        SiPairClass::DistinctConcClasses => "DistinctConcClasses".into(),
        SiPairClass::Indeterminate(why) => format!("Indeterminate({why})"),
    }
}

pub fn conc_report_json(r: &ConcClassReport) -> Value {
    json!({
        "k_in_l": r.k_in_l,
        "k_in_dual_l": r.k_in_dual_l,
        "l_in_k": r.l_in_k,
        "l_in_dual_k": r.l_in_dual_k,
        "relation": format!("{:?}", r.relation),
        "isomorphic": r.isomorphic,
        "dually_isomorphic": r.dually_isomorphic,
        "si_class": r.si_class.as_ref().map(si_class_str),
    })
}

pub fn chain_witness_json(w: &ChainWitness) -> Value {
    json!({ "node": w.node, "chain": w.labels, "atoms": w.sigma, "direct": w.direct })
}

pub fn lifting_check_json(c: &LiftingCheck) -> Value {
    json!({
        "valid": c.valid,
        "squares_checked": c.squares_checked,
        "failure": c.failure.as_ref().map(|f| json!({
            "kind": format!("{:?}", f.kind),
            "from": f.from,
            "to": f.to,
            "detail": f.detail,
        })),
    })
}

pub fn embedding_json(r: &EmbeddingReport) -> Value {
    json!({
        "passed": r.passed(),
        "dualized": r.dualized,
        "h": r.k_labels.iter().cloned().zip(r.h_labels.iter().cloned()).collect::<BTreeMap<_, _>>(),
        "chains": r.chains.iter().map(chain_witness_json).collect::<Vec<_>>(),
        "sections": r.sections.iter().map(|s| json!({
            "name": s.name,
            "checks": s.checks,
            "passed": s.passed(),
            "failures": s.failures,
        })).collect::<Vec<_>>(),
    })
}

pub fn directing_json(c: &DirectingCheck) -> Value {
    json!({
        "holds": c.holds,
        "chains_checked": c.chains_checked,
        "counterexample": c.counterexample.as_ref().map(chain_witness_json),
    })
}

pub fn retraction_json(r: &RetractionChain, a: &FiniteLattice) -> Value {
    json!({
        "u": a.label(r.u),
        "v": a.label(r.v),
        "chain": chain_witness_json(&r.witness),
        "betas": r.betas,
        "swapped": r.swapped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::chain_diagram;
    use crate::lifting::verify_lifting;

    #[test]
    fn lattice_round_trip() {
        for l in [builtin::m(3), builtin::n5(), builtin::f22(), builtin::boolean(3)] {
            let back = lattice_from_str(&lattice_to_string(&l)).unwrap();
            assert_eq!(back, l);
            assert_eq!(back.name(), l.name());
        }
    }

    #[test]
    fn lattice_errors() {
        let bad = r#"{"name":"v","elements":["a","b","c"],"covers":[["a","b"],["a","c"]]}"#;
        assert!(matches!(lattice_from_str(bad), Err(Error::NotALattice { .. })));
        let v2 = r#"{"schema":2,"name":"t","elements":["0"],"covers":[]}"#;
        assert!(matches!(lattice_from_str(v2), Err(Error::Parse(_))));
        assert!(matches!(lattice_from_str("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn congruence_blocks_round_trip() {
        let l = Arc::new(builtin::n5());
        let t = crate::congruence::principal_congruence(&l, 0, 1);
        let blocks = congruence_blocks(&t);
        assert_eq!(congruence_from_blocks(&l, &blocks).unwrap(), t);
    }

    #[test]
    fn diagram_round_trip() {
        let l = Arc::new(builtin::m(3));
        let (d, _) = chain_diagram(&l, &[vec![0, 1, 4], vec![0, 2, 4], vec![0, 3, 4]]).unwrap();
        let b = Budget::default();
        let back = diagram_from_str(&diagram_to_string(&d), &b).unwrap();
        assert_eq!(back.poset().names(), d.poset().names());
        for (i, j) in d.poset().pairs() {
            assert_eq!(back.map(i, j), d.map(i, j));
        }
        for i in 0..d.poset().len() {
            assert_eq!(back.node(i), d.node(i));
        }
    }

    #[test]
    fn lifting_round_trip() {
        let l = Arc::new(builtin::m(3));
        let (d, _) = chain_diagram(&l, &[vec![0, 1, 4], vec![0, 2, 4]]).unwrap();
        let b = Budget::default();
        let lift = Lifting::dual_of(&d, &b).unwrap();
        let text = lifting_to_string(&lift, &d);
        let (back, a) = lifting_from_str(&text, &b).unwrap();
        assert!(verify_lifting(&back, &b).unwrap().valid);
        assert_eq!(a.poset().names(), d.poset().names());
        for i in 0..d.poset().len() {
            assert_eq!(back.xi(i).map, lift.xi(i).map);
        }
    }
}
