//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! report is always printed; any failing criterion makes the process fail.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use critlat::builtin;
use critlat::congruence::{con_lattice, is_congruence_chain, is_direct_congruence_chain, kernel, ConcMap};
use critlat::critpoint::{crit_gate, Verdict};
use critlat::diagram::{base_diagram, chain_diagram_of_partial, directing_diagram, ChainSpec, IndexPoset, LatticeDiagram};
use critlat::lifting::{
    check_directing_property, extract_embedding, extract_embedding_either, node_congruence_chains,
    retraction_congruence_chain, verify_lifting, ExtractOptions, Lifting,
};
use critlat::sublattice::{induced_partial_sublattice, maximal_chains, PartialLattice};
use critlat::variety::{si_pair_classifier, var_leq, SiPairClass};
use critlat::{product, Budget, Error, FiniteLattice, Homomorphism};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn rgs(v: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    v.iter()
        .map(|c| match seen.iter().position(|s| s == c) {
            Some(i) => i,
            None => {
                seen.push(*c);
                seen.len() - 1
            }
        })
        .collect()
}

fn library_congruences(l: &Arc<FiniteLattice>, b: &Budget) -> BTreeSet<Vec<usize>> {
    con_lattice(l, b).unwrap().members().iter().map(|c| rgs(c.classes())).collect()
}

fn congruence_oracle() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut corpus: Vec<Arc<FiniteLattice>> = common::all_lattices(6).into_iter().map(Arc::new).collect();
    let exhaustive = corpus.len();
    corpus.extend(common::named_corpus());
    for l in &corpus {
        let got = library_congruences(l, &b);
        let want = common::brute_congruences(l);
        ensure(got == want, || format!("{}: {} congruences, oracle {}", l.name(), got.len(), want.len()))?;
    }
    within(start, Duration::from_secs(120), "corpus")?;
    Ok(format!("{} lattices ({exhaustive} with at most 6 elements) in {:?}", corpus.len(), start.elapsed()))
}

fn known_values() -> Outcome {
    let b = Budget::default();
    let m3 = Arc::new(builtin::m(3));
    ensure(common::brute_congruences(&m3).len() == 2, || "oracle: Con M3".into())?;
    ensure(con_lattice(&m3, &b).unwrap().len() == 2, || "Con M3 is not 2".into())?;
    for n in 1..=5 {
        let c = Arc::new(builtin::chain(n));
        let expected = 1 << n;
        ensure(common::brute_congruences(&c).len() == expected, || format!("oracle: Con chain({n})"))?;
        let check = con_lattice(&c, &b).unwrap().is_boolean();
        ensure(check.is_boolean && check.atoms.len() == n, || format!("Con chain({n}) is not 2^{n}"))?;
    }
    let n5 = Arc::new(builtin::n5());
    ensure(common::brute_congruences(&n5).len() == 5, || "oracle: Con N5".into())?;
    ensure(con_lattice(&n5, &b).unwrap().len() == 5, || "Con N5 is not 5".into())?;
    Ok("Con M3 = 2, Con chain(n) = 2^n for n <= 5, Con N5 = 5".into())
}

fn gate_matches() -> Outcome {
    let b = Budget::default();
    let mut n_checks = 0;
    let mut gate = |k: FiniteLattice, l: FiniteLattice, want: Verdict| -> Result<(), String> {
        let start = Instant::now();
        let (kn, ln) = (k.name().to_string(), l.name().to_string());
        let v = crit_gate(&Arc::new(k), &Arc::new(l), &b).map_err(|e| e.to_string())?;
        ensure(v.verdict == want, || format!("crit({kn}, {ln}) = {:?}, want {want:?}", v.verdict))?;
        within(start, Duration::from_secs(30), &format!("crit({kn}, {ln})"))?;
        n_checks += 1;
        Ok(())
    };
    for m in 3..=5 {
        for n in 3..m {
            gate(builtin::m(m), builtin::m(n), Verdict::AtMostAleph2)?;
            gate(builtin::m(n), builtin::m(m), Verdict::Infinite)?;
        }
    }
    gate(builtin::m(3), builtin::two(), Verdict::AtMostAleph2)?;
    Ok(format!("{n_checks} gate decisions"))
}

fn relabeled_n5() -> FiniteLattice {
    let labels = ["t", "p", "a", "q", "b"].map(String::from).to_vec();
    FiniteLattice::from_covers("N5'", labels, &[("b", "a"), ("a", "q"), ("q", "t"), ("b", "p"), ("p", "t")]).unwrap()
}

fn si_pairs() -> Outcome {
    let b = Budget::default();
    let si: Vec<Arc<FiniteLattice>> =
        [builtin::two(), builtin::chain(1), builtin::m(3), builtin::m(4), builtin::n5()].into_iter().map(Arc::new).collect();
    let mut separated = 0;
    for k in &si {
        for l in &si {
            let class = si_pair_classifier(k, l, &b).map_err(|e| e.to_string())?;
            let (dk, dl) = (Arc::new(k.dual()), Arc::new(l.dual()));
            let all_fail = !var_leq(k, l, &b).unwrap().holds
                && !var_leq(k, &dl, &b).unwrap().holds
                && !var_leq(l, k, &b).unwrap().holds
                && !var_leq(l, &dk, &b).unwrap().holds;
            if all_fail {
                separated += 1;
                ensure(!matches!(class, SiPairClass::Isomorphic | SiPairClass::DuallyIsomorphic), || {
                    format!("({}, {}) classified {class:?} although no containment holds", k.name(), l.name())
                })?;
            }
        }
    }
    let class = si_pair_classifier(&Arc::new(builtin::n5()), &Arc::new(relabeled_n5()), &b).map_err(|e| e.to_string())?;
    ensure(class == SiPairClass::Isomorphic, || format!("(N5, N5 relabeled) classified {class:?}"))?;
    Ok(format!("{} pairs, {separated} fully separated; N5 vs relabeled N5 isomorphic", si.len() * si.len()))
}

fn full_partial(l: &Arc<FiniteLattice>) -> PartialLattice {
    induced_partial_sublattice(l, &l.elements().collect::<Vec<_>>()).unwrap()
}

fn chain_diagram_structure() -> Outcome {
    let m3 = Arc::new(builtin::m(3));
    let (d, index) = chain_diagram_of_partial(&full_partial(&m3)).map_err(|e| e.to_string())?;
    let p = d.poset();
    ensure(p.len() == 8, || format!("{} nodes", p.len()))?;
    let e = base_diagram(index.chains()).map_err(|e| e.to_string())?;
    let r = d.restrict(&index.jc_names()).map_err(|e| e.to_string())?;
    ensure(r.poset().names() == e.poset().names(), || "JC node sets differ".into())?;
    for i in 0..r.poset().len() {
        ensure(r.node(i) == e.node(i), || format!("node {} differs from the base diagram", r.poset().name(i)))?;
    }
    for (i, j) in r.poset().pairs() {
        ensure(r.map(i, j) == e.map(i, j), || format!("map {} → {} differs", r.poset().name(i), r.poset().name(j)))?;
    }
    let top = index.top();
    for i in (0..p.len()).filter(|&i| i != top) {
        ensure(d.node(i).is_distributive(), || format!("node {} is not distributive", p.name(i)))?;
    }
    d.verify().map_err(|e| e.to_string())?;
    Ok(format!("8 nodes, restriction to JC equals the base diagram, {} commuting pairs", p.pairs().len()))
}

fn embedding_end_to_end() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let m3 = Arc::new(builtin::m(3));
    let k = full_partial(&m3);
    let (d, index) = chain_diagram_of_partial(&k).map_err(|e| e.to_string())?;
    let id = Lifting::identity(&d, &b).map_err(|e| e.to_string())?;
    let r = extract_embedding(&id, &index, &k, &ExtractOptions::default(), &b).map_err(|e| e.to_string())?;
    let top = d.node(index.top()).table().unwrap().clone();
    let h = Homomorphism::new(m3.clone(), top, r.h.clone()).map_err(|e| e.to_string())?;
    ensure(h.is_isomorphism(), || "h is not a bijection onto M3".into())?;
    ensure(r.sections.len() == 3 && r.passed(), || "a report section failed".into())?;
    let dual = Lifting::dual_of(&d, &b).map_err(|e| e.to_string())?;
    let plain = extract_embedding(&dual, &index, &k, &ExtractOptions::default(), &b);
    ensure(matches!(plain, Err(Error::MissingDirectChain(_))), || format!("dual lifting in original orientation gave {plain:?}"))?;
    let r = extract_embedding_either(&dual, &index, &k, &b).map_err(|e| e.to_string())?;
    ensure(r.dualized && r.passed(), || "dualized extraction failed".into())?;
    within(start, Duration::from_secs(10), "extraction")?;
    Ok(format!("identity gives an isomorphism onto M3, dual needs dualizing; {:?}", start.elapsed()))
}

fn directing_instance() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let c = |s: &[&str]| ChainSpec::new(s.iter().copied()).unwrap();
    let (c1, c2, c3) = (c(&["0", "x1", "1"]), c(&["0", "x2", "1"]), c(&["0", "x3", "1"]));
    let mut checked = 0;
    for kgen in [builtin::m(3), builtin::n5()] {
        let name = kgen.name().to_string();
        let d = directing_diagram(&Arc::new(kgen), &c1, &c2, &c3, &b).map_err(|e| e.to_string())?;
        let l = Lifting::identity(&d, &b).map_err(|e| e.to_string())?;
        let empty = d.node_by_name("∅").unwrap();
        let r = check_directing_property(&l, &c1, &c2, &c3, empty.bottom(), empty.top(), &b).map_err(|e| e.to_string())?;
        ensure(r.holds && r.chains_checked > 0, || format!("{name}: counterexample {:?}", r.counterexample))?;
        checked += r.chains_checked;
    }
    within(start, Duration::from_secs(60), "directing checks")?;
    Ok(format!("M3 and N5: {checked} chains at the third chain node, all direct"))
}

fn retraction_chain() -> Outcome {
    let b = Budget::default();
    let two = Arc::new(builtin::two());
    let (sq, proj) = product(&[two.clone(), two.clone()], 16).map_err(|e| e.to_string())?;
    let diag = Homomorphism::new(two.clone(), sq.clone(), vec![0, 3]).map_err(|e| e.to_string())?;
    let r = retraction_congruence_chain(&diag, &proj[0], &proj[1], &b).map_err(|e| e.to_string())?;
    let con = con_lattice(&sq, &b).unwrap();
    let ch = &r.witness.chain;
    ensure(ch.len() == 3 && ch[0] == 0 && ch[2] == 3, || format!("chain {:?}", r.witness.labels))?;
    let steps = [con.principal(ch[0], ch[1]), con.principal(ch[1], ch[2])];
    ensure(steps == r.betas, || "step congruences differ from the reported betas".into())?;
    let kernels: BTreeSet<usize> = proj.iter().map(|p| con.index_of(&kernel(p)).unwrap()).collect();
    ensure(steps[0] != steps[1] && steps.iter().copied().collect::<BTreeSet<_>>() == kernels, || {
        "steps are not the two coatoms".into()
    })?;
    Ok(format!("{} with distinct coatom steps", r.witness.labels.join(" < ")))
}

/// Liftings the mutation suite corrupts, with their index posets and K.
fn mutation_bases(b: &Budget) -> Vec<(String, Lifting, IndexPoset, PartialLattice)> {
    let mut out = Vec::new();
    for l in [builtin::m(3), builtin::n5()] {
        let l = Arc::new(l);
        let k = full_partial(&l);
        let (d, index) = chain_diagram_of_partial(&k).unwrap();
        out.push((format!("id {}", l.name()), Lifting::identity(&d, b).unwrap(), index.clone(), k.clone()));
        out.push((format!("dual {}", l.name()), Lifting::dual_of(&d, b).unwrap(), index, k));
    }
    out
}

/// Round-robin over the per-base lists, so every base contributes mutants.
fn interleave<T>(lists: Vec<Vec<T>>) -> Vec<T> {
    let mut iters: Vec<_> = lists.into_iter().map(Vec::into_iter).collect();
    let mut out = Vec::new();
    loop {
        let before = out.len();
        for it in &mut iters {
            out.extend(it.next());
        }
        if out.len() == before {
            return out;
        }
    }
}

fn edge_mutations(bases: &[(String, Lifting, IndexPoset, PartialLattice)]) -> Vec<(String, Lifting)> {
    let mut per_base = Vec::new();
    for (name, l, _, _) in bases {
        let mut out = Vec::new();
        let d: &LatticeDiagram = l.source();
        for (i, j) in d.poset().covers() {
            let m = d.map(i, j);
            let size = d.node(j).len();
            for x in 0..m.len() {
                let mut bad = m.to_vec();
                bad[x] = (bad[x] + 1) % size;
                let what = format!("{name}: g({} → {}) at {x}", d.poset().name(i), d.poset().name(j));
                out.push((what, l.with_source_map_unchecked(i, j, bad)));
            }
        }
        per_base.push(out);
    }
    interleave(per_base)
}

fn xi_mutations(bases: &[(String, Lifting, IndexPoset, PartialLattice)]) -> Vec<(String, Lifting)> {
    let mut per_base = Vec::new();
    for (name, l, _, _) in bases {
        let mut out = Vec::new();
        for i in 0..l.source().poset().len() {
            let x = l.xi(i);
            let con = &x.source;
            let check = con.is_boolean();
            if !check.is_boolean || check.atoms.len() < 2 {
                continue;
            }
            let atoms = &check.atoms;
            for (s, t) in [(0, 1)].into_iter().chain((2..atoms.len()).map(|t| (0, t))) {
                // The automorphism of Con B_P exchanging two atoms.
                let swap = |a: usize| {
                    if a == atoms[s] {
                        atoms[t]
                    } else if a == atoms[t] {
                        atoms[s]
                    } else {
                        a
                    }
                };
                let perm = (0..con.len())
                    .map(|m| atoms.iter().filter(|&&a| con.leq(a, m)).fold(con.zero(), |acc, &a| con.join(acc, swap(a))))
                    .collect();
                let pre = ConcMap::new(con.clone(), con.clone(), perm).unwrap();
                let what = format!("{name}: ξ at {} with atoms {s},{t} swapped", l.source().poset().name(i));
                out.push((what, l.with_xi_unchecked(i, pre.then(x).unwrap())));
            }
        }
        per_base.push(out);
    }
    interleave(per_base)
}

/// Each corrupted chain is offered to the extraction in place of a direct one.
fn chain_mutations(bases: &[(String, Lifting, IndexPoset, PartialLattice)], b: &Budget) -> Vec<(String, bool)> {
    let mut per_base = Vec::new();
    for (name, l, index, k) in bases.iter().filter(|(n, ..)| n.starts_with("id")) {
        let mut out = Vec::new();
        let empty = l.node("∅").unwrap();
        for c in index.chains() {
            let i = l.node(&format!("{{{}}}", c.name())).unwrap();
            let g = l.source().map(empty, i);
            let (u, v) = (g[l.source().node(empty).bottom()], g[l.source().node(empty).top()]);
            let good = node_congruence_chains(l, i, u, v, b).unwrap().into_iter().find(|w| w.direct == Some(true)).unwrap();
            let n = good.chain.len();
            let host = l.xi(i).target.host();
            let mut reference: Vec<usize> = host.elements().collect();
            reference.sort_by_key(|&x| host.height(x));
            let swaps: Vec<(usize, usize)> = (0..n - 1).map(|p| (p, p + 1)).chain([(0, n - 1)]).collect();
            for (p, q) in swaps {
                let mut bad = good.chain.clone();
                bad.swap(p, q);
                let direct = matches!(is_direct_congruence_chain(&bad, l.xi(i), &reference), Ok(true))
                    && matches!(is_congruence_chain(&l.xi(i).source, &bad), Ok(Some(_)));
                let mut opts = ExtractOptions::default();
                opts.choices.insert(c.name(), bad);
                let extracted = extract_embedding(l, index, k, &opts, b).is_ok();
                out.push((format!("{name}: chain {} positions {p},{q} swapped", c.name()), direct || extracted));
            }
        }
        per_base.push(out);
    }
    interleave(per_base)
}

fn mutation_suite() -> Outcome {
    let b = Budget::default();
    let bases = mutation_bases(&b);
    for (name, l, index, k) in &bases {
        ensure(verify_lifting(l, &b).unwrap().valid, || format!("base lifting {name} is invalid"))?;
        let r = extract_embedding_either(l, index, k, &b).map_err(|e| format!("base lifting {name}: {e}"))?;
        ensure(r.passed(), || format!("base lifting {name} does not yield an embedding"))?;
    }
    let edges = edge_mutations(&bases);
    let xis = xi_mutations(&bases);
    let chains = chain_mutations(&bases, &b);
    ensure(edges.len() >= 20 && xis.len() >= 15 && chains.len() >= 15, || {
        format!("too few mutants: {} edge, {} ξ, {} chain", edges.len(), xis.len(), chains.len())
    })?;
    let mut missed = Vec::new();
    for (what, l) in edges.into_iter().take(20).chain(xis.into_iter().take(15)) {
        if verify_lifting(&l, &b).unwrap().valid {
            missed.push(what);
        }
    }
    for (what, survived) in chains.into_iter().take(15) {
        if survived {
            missed.push(what);
        }
    }
    ensure(missed.is_empty(), || format!("{} undetected: {}", missed.len(), missed.join("; ")))?;
    Ok("50/50 mutants detected (20 edge maps, 15 ξ atom swaps, 15 chain swaps)".into())
}

fn maximal_chains_are_congruence_chains() -> Outcome {
    let b = Budget::default();
    let corpus = common::distributive_lattices(8);
    let mut chains = 0;
    for l in corpus.iter().cloned().map(Arc::new) {
        let con = con_lattice(&l, &b).unwrap();
        for c in maximal_chains(&l) {
            let ok = matches!(is_congruence_chain(&con, &c), Ok(Some(_)));
            ensure(ok, || format!("{}: maximal chain {c:?} is not a congruence chain", l.name()))?;
            chains += 1;
        }
    }
    Ok(format!("{} distributive lattices, {chains} maximal chains", corpus.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("congruence oracle equivalence", congruence_oracle),
        ("known congruence lattices", known_values),
        ("critical point gate", gate_matches),
        ("SI pair classification", si_pairs),
        ("chain diagram structure", chain_diagram_structure),
        ("embedding from a lifting", embedding_end_to_end),
        ("directing property", directing_instance),
        ("retraction congruence chain", retraction_chain),
        ("mutation detection", mutation_suite),
        ("maximal chains in distributive lattices", maximal_chains_are_congruence_chains),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
