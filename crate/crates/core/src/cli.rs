//! The `critlat` command-line tool.
//!
//! Exit codes: 0 on success, 2 on parse, validation or budget errors, and 3
//! when `crit-gate` answers `AtMostAleph2`.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::budget::{Budget, MAX_SIZE_ENV};
use crate::congruence::{con_lattice, ConLattice};
use crate::critpoint::{conc_class_report, crit_gate};
use crate::diagram::{chain_diagram, chain_diagram_of_partial, directing_diagram, glued_diagram, ChainSpec, IndexPoset, LatticeDiagram};
use crate::dot::{diagram_dot, hasse_dot};
use crate::error::{Error, Result};
use crate::io;
use crate::iso::find_isomorphism;
use crate::lattice::{Elem, FiniteLattice};
use crate::lifting::{extract_embedding_either, find_congruence_chains, verify_lifting, Lifting};
use crate::sublattice::{induced_partial_sublattice, maximal_chains};
use crate::variety::{hs_member, is_subdirectly_irreducible, si_quotients, var_leq};

#[derive(Parser, Debug)]
#[command(name = "critlat", version, about = "Congruence lattices, variety containment and chain-diagram liftings of finite lattices")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest lattice accepted by HS-membership and variety containment.
    #[arg(long, global = true, env = MAX_SIZE_ENV, default_value_t = Budget::default().max_hs_size)]
    max_size: usize,
    /// Maximum number of subuniverses enumerated in one search.
    #[arg(long, global = true, default_value_t = Budget::default().max_subuniverses)]
    max_subuniverses: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

/// A lattice argument is a builtin name (`2`, `chain:n`, `M:n`, `N5`,
/// `bool:n`, `F22`) or the path of a lattice file.
#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a file describes a lattice.
    Validate { lattice: String },
    /// List the congruences of a lattice.
    Con { lattice: String },
    /// Is the lattice simple?
    Simple { lattice: String },
    /// Subdirect irreducibility and the SI quotients.
    Si { lattice: String },
    /// Is M in HS(L)?
    HsMember { m: String, l: String },
    /// Is Var K contained in Var L?
    VarLeq { k: String, l: String },
    /// Is crit(Var K, Var L) infinite or at most aleph 2?
    CritGate { k: String, l: String },
    /// The chain diagram of spanning chains of a lattice.
    ChainDiagram {
        lattice: String,
        /// A spanning chain such as `0<x1<1`; repeatable. Defaults to all maximal chains.
        #[arg(long = "chain")]
        chains: Vec<String>,
        /// Write the diagram to this file.
        #[arg(long, short)]
        output: Option<String>,
        /// Write a lifting bundle (`identity` or `dual`) to this file instead.
        #[arg(long, requires = "output")]
        bundle: Option<String>,
    },
    /// The directing diagram of M3 or N5 over three chains.
    DirectingDiagram {
        kgen: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        c3: String,
    },
    /// The glued diagram of a partial sublattice.
    GluedDiagram {
        lattice: String,
        /// Comma-separated labels of the partial sublattice; defaults to all.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Verify a lifting bundle.
    LiftCheck { bundle: String },
    /// Extract the embedding of K into the top of a lifting of its chain diagram.
    ExtractEmbedding {
        lattice: String,
        #[arg(long)]
        subset: Option<String>,
        /// `identity`, `dual`, or the path of a lifting bundle.
        #[arg(long, default_value = "identity")]
        lifting: String,
    },
    /// Congruence chains between two elements.
    FindChains {
        lattice: String,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// The dual lattice.
    Dual { lattice: String },
    /// An isomorphism between two lattices.
    Iso { k: String, l: String },
    /// The relation between the congruence classes of Var K and Var L.
    ConcReport { k: String, l: String },
    /// Graphviz rendering of a lattice, or of a diagram file with `--diagram`.
    ExportDot {
        input: String,
        #[arg(long)]
        diagram: bool,
    },
}

struct Ctx<'a> {
    json: bool,
    budget: Budget,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, human: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<()> {
        let text = if self.json {
            serde_json::to_string_pretty(&io::with_schema(json())).expect("serializable")
        } else {
            human()
        };
        writeln!(self.out, "{}", text.trim_end())?;
        Ok(())
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut budget = Budget::default().with_threads(cli.global.threads);
    budget.max_hs_size = cli.global.max_size;
    budget.max_subuniverse_host = budget.max_subuniverse_host.max(cli.global.max_size);
    budget.max_subuniverses = cli.global.max_subuniverses;
    let mut ctx = Ctx { json: cli.global.json, budget, out };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let name = error_name(&e);
            if ctx.json {
                let _ = writeln!(err, "{}", json!({"schema": io::SCHEMA, "error": name, "message": e.to_string()}));
            } else {
                let _ = writeln!(err, "error ({name}): {e}");
            }
            2
        }
    }
}

fn error_name(e: &Error) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn load(spec: &str) -> Result<Arc<FiniteLattice>> {
    io::load_lattice(spec).map(Arc::new)
}

fn subset(l: &FiniteLattice, spec: Option<&str>) -> Result<Vec<Elem>> {
    match spec {
        None => Ok(l.elements().collect()),
        Some(s) => s.split(',').map(|x| l.elem_or_err(x.trim())).collect(),
    }
}

fn chain_spec(s: &str) -> Result<ChainSpec> {
    ChainSpec::new(s.split('<').map(str::trim))
}

fn con_members(con: &ConLattice) -> Vec<Value> {
    con.members().iter().map(|c| json!(io::congruence_blocks(c))).collect()
}

fn render_blocks(blocks: &[Vec<String>]) -> String {
    blocks.iter().map(|b| format!("{{{}}}", b.join(","))).collect::<Vec<_>>().join(" ")
}

fn diagram_summary(d: &LatticeDiagram) -> String {
    let p = d.poset();
    let mut s = format!("{} nodes\n", p.len());
    for i in 0..p.len() {
        let n = d.node(i);
        s.push_str(&format!("  {}: {} elements{}\n", p.name(i), n.len(), if n.table().is_some() { "" } else { " (product)" }));
    }
    s
}

fn diagram_json(d: &LatticeDiagram) -> Value {
    let p = d.poset();
    json!({
        "nodes": (0..p.len()).map(|i| json!({"name": p.name(i), "size": d.node(i).len()})).collect::<Vec<_>>(),
        "covers": p.covers().iter().map(|&(i, j)| [p.name(i), p.name(j)]).collect::<Vec<_>>(),
    })
}

fn lifting_for(arg: &str, d: &LatticeDiagram, budget: &Budget) -> Result<Lifting> {
    match arg {
        "identity" => Lifting::identity(d, budget),
        "dual" => Lifting::dual_of(d, budget),
        path => Ok(io::lifting_from_str(&std::fs::read_to_string(path)?, budget)?.0),
    }
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::from)
}

fn dispatch(cmd: Command, ctx: &mut Ctx<'_>) -> Result<i32> {
    let budget = ctx.budget.clone();
    match cmd {
        Command::Validate { lattice } => {
            let l = load(&lattice)?;
            ctx.emit(
                || {
                    format!(
                        "valid: {} ({} elements, {} covers, distributive: {}, modular: {})",
                        l.name(),
                        l.len(),
                        l.covers().len(),
                        l.is_distributive(),
                        l.is_modular()
                    )
                },
                || json!({"valid": true, "lattice": io::lattice_json(&l), "distributive": l.is_distributive(), "modular": l.is_modular()}),
            )?;
        }
        Command::Con { lattice } => {
            let l = load(&lattice)?;
            let con = con_lattice(&l, &budget)?;
            let simple = con.len() == 2;
            let b = con.is_boolean();
            ctx.emit(
                || {
                    let mut s = format!("simple: {simple}, |Con| = {}\n", con.len());
                    s.push_str(&format!("boolean: {}, atoms: {}\n", b.is_boolean, b.atoms.len()));
                    for (i, c) in con.members().iter().enumerate() {
                        s.push_str(&format!("  [{i}] {}\n", render_blocks(&io::congruence_blocks(c))));
                    }
                    s
                },
                || json!({"simple": simple, "size": con.len(), "boolean": b.is_boolean, "atoms": b.atoms, "congruences": con_members(&con)}),
            )?;
        }
        Command::Simple { lattice } => {
            let l = load(&lattice)?;
            let simple = con_lattice(&l, &budget)?.len() == 2;
            ctx.emit(|| format!("simple: {simple}"), || json!({"simple": simple}))?;
        }
        Command::Si { lattice } => {
            let l = load(&lattice)?;
            let si = is_subdirectly_irreducible(&l, &budget)?;
            let qs = si_quotients(&l, &budget)?;
            ctx.emit(
                || {
                    let mut s = format!("subdirectly irreducible: {si}\nSI quotients: {}\n", qs.len());
                    for q in &qs {
                        s.push_str(&format!("  {} elements by {}\n", q.quotient.len(), render_blocks(&io::congruence_blocks(&q.theta))));
                    }
                    s
                },
                || json!({"si": si, "quotients": qs.iter().map(io::si_quotient_json).collect::<Vec<_>>()}),
            )?;
        }
        Command::HsMember { m, l } => {
            let (m, l) = (load(&m)?, load(&l)?);
            let w = hs_member(&m, &l, &budget)?;
            ctx.emit(
                || match &w {
                    Some(w) => format!(
                        "member: true\nsublattice: {}\ncongruence: {}",
                        w.sublattice.iter().map(|&x| l.label(x)).collect::<Vec<_>>().join(","),
                        render_blocks(&io::congruence_blocks(&w.theta))
                    ),
                    None => "member: false".into(),
                },
                || json!({"member": w.is_some(), "witness": w.as_ref().map(|w| io::hs_witness_json(w, &m, &l))}),
            )?;
        }
        Command::VarLeq { k, l } => {
            let (k, l) = (load(&k)?, load(&l)?);
            let r = var_leq(&k, &l, &budget)?;
            ctx.emit(
                || {
                    let mut s = format!("Var {} ⊆ Var {}: {}\n", k.name(), l.name(), r.holds);
                    if let Some(q) = &r.failing {
                        s.push_str(&format!("failing SI quotient: {} elements\n", q.quotient.len()));
                    }
                    s
                },
                || io::var_leq_json(&r, &l),
            )?;
        }
        Command::CritGate { k, l } => {
            let (k, l) = (load(&k)?, load(&l)?);
            let v = crit_gate(&k, &l, &budget)?;
            ctx.emit(
                || format!("verdict: {}\n{}", v.verdict.as_str(), v.justification),
                || io::crit_verdict_json(&v, &l),
            )?;
            return Ok(v.verdict.exit_code());
        }
        Command::ChainDiagram { lattice, chains, output, bundle } => {
            let l = load(&lattice)?;
            let chains: Vec<Vec<Elem>> = if chains.is_empty() {
                maximal_chains(&l)
            } else {
                chains.iter().map(|c| chain_spec(c)?.elems_in(&l)).collect::<Result<_>>()?
            };
            let (d, _) = chain_diagram(&l, &chains)?;
            if let Some(path) = &output {
                let text = match bundle.as_deref() {
                    None => io::diagram_to_string(&d),
                    Some(kind @ ("identity" | "dual")) => io::lifting_to_string(&lifting_for(kind, &d, &budget)?, &d),
                    Some(other) => return Err(Error::Parse(format!("unknown bundle kind `{other}`"))),
                };
                write_file(path, &text)?;
            }
            ctx.emit(|| diagram_summary(&d), || diagram_json(&d))?;
        }
        Command::DirectingDiagram { kgen, c1, c2, c3 } => {
            let kgen = load(&kgen)?;
            let (c1, c2, c3) = (chain_spec(&c1)?, chain_spec(&c2)?, chain_spec(&c3)?);
            let d = directing_diagram(&kgen, &c1, &c2, &c3, &budget)?;
            ctx.emit(|| diagram_summary(&d), || diagram_json(&d))?;
        }
        Command::GluedDiagram { lattice, subset: sub } => {
            let l = load(&lattice)?;
            let k = induced_partial_sublattice(&l, &subset(&l, sub.as_deref())?)?;
            let g = glued_diagram(&k, &l, &budget)?;
            let triples: Vec<String> = g.triples.iter().map(|(a, b, c)| format!("({a}, {b}, {c})")).collect();
            ctx.emit(
                || format!("{}admissible triples: {}\n  {}", diagram_summary(&g.diagram), triples.len(), triples.join("\n  ")),
                || {
                    let mut v = diagram_json(&g.diagram);
                    v["triples"] = json!(triples);
                    v["factor_counts"] = json!(g.factor_counts);
                    v
                },
            )?;
        }
        Command::LiftCheck { bundle } => {
            let (l, _) = io::lifting_from_str(&std::fs::read_to_string(&bundle)?, &budget)?;
            let r = verify_lifting(&l, &budget)?;
            ctx.emit(
                || match &r.failure {
                    None => format!("valid: true ({} squares)", r.squares_checked),
                    Some(f) => format!("valid: false\n{:?} failure at {} → {}: {}", f.kind, f.from, f.to, f.detail),
                },
                || io::lifting_check_json(&r),
            )?;
            if !r.valid {
                return Err(Error::VerificationFailed { section: "lifting".into(), detail: "lifting does not verify".into() });
            }
        }
        Command::ExtractEmbedding { lattice, subset: sub, lifting } => {
            let l = load(&lattice)?;
            let k = induced_partial_sublattice(&l, &subset(&l, sub.as_deref())?)?;
            let (d, index): (LatticeDiagram, IndexPoset) = chain_diagram_of_partial(&k)?;
            let lift = lifting_for(&lifting, &d, &budget)?;
            let r = extract_embedding_either(&lift, &index, &k, &budget)?;
            ctx.emit(
                || {
                    let mut s = format!("dualized: {}\n", r.dualized);
                    for (x, y) in r.k_labels.iter().zip(&r.h_labels) {
                        s.push_str(&format!("  h({x}) = {y}\n"));
                    }
                    for sec in &r.sections {
                        s.push_str(&format!("{}: {} ({} checks)\n", sec.name, if sec.passed() { "pass" } else { "FAIL" }, sec.checks));
                    }
                    s
                },
                || io::embedding_json(&r),
            )?;
        }
        Command::FindChains { lattice, from, to } => {
            let l = load(&lattice)?;
            let u = from.map_or(Ok(l.bottom()), |s| l.elem_or_err(&s))?;
            let v = to.map_or(Ok(l.top()), |s| l.elem_or_err(&s))?;
            let con = con_lattice(&l, &budget)?;
            let ws = find_congruence_chains(&con, u, v, &budget)?;
            ctx.emit(
                || {
                    let mut s = format!("{} congruence chains\n", ws.len());
                    for w in &ws {
                        s.push_str(&format!("  {}\n", w.labels.join(" < ")));
                    }
                    s
                },
                || json!({"chains": ws.iter().map(io::chain_witness_json).collect::<Vec<_>>()}),
            )?;
        }
        Command::Dual { lattice } => {
            let d = load(&lattice)?.dual();
            ctx.emit(|| io::lattice_to_string(&d), || io::lattice_json(&d))?;
        }
        Command::Iso { k, l } => {
            let (k, l) = (load(&k)?, load(&l)?);
            let map = find_isomorphism(&k, &l);
            let pairs = |m: &Vec<Elem>| -> Vec<(String, String)> {
                m.iter().enumerate().map(|(x, &y)| (k.label(x).to_string(), l.label(y).to_string())).collect()
            };
            ctx.emit(
                || match &map {
                    Some(m) => {
                        let body: Vec<String> = pairs(m).into_iter().map(|(a, b)| format!("  {a} -> {b}")).collect();
                        format!("isomorphic: true\n{}", body.join("\n"))
                    }
                    None => "isomorphic: false".into(),
                },
                || json!({"isomorphic": map.is_some(), "map": map.as_ref().map(pairs)}),
            )?;
        }
        Command::ConcReport { k, l } => {
            let (k, l) = (load(&k)?, load(&l)?);
            let r = conc_class_report(&k, &l, &budget)?;
            ctx.emit(
                || {
                    format!(
                        "Var K ⊆ Var L: {}\nVar K ⊆ Var dual L: {}\nVar L ⊆ Var K: {}\nVar L ⊆ Var dual K: {}\nConc classes: {:?}\nisomorphic: {}, dually isomorphic: {}",
                        r.k_in_l, r.k_in_dual_l, r.l_in_k, r.l_in_dual_k, r.relation, r.isomorphic, r.dually_isomorphic
                    )
                },
                || io::conc_report_json(&r),
            )?;
        }
        Command::ExportDot { input, diagram } => {
            let text = if diagram {
                diagram_dot(&io::diagram_from_str(&std::fs::read_to_string(&input)?, &budget)?)
            } else {
                hasse_dot(&io::load_lattice(&input)?)
            };
            write!(ctx.out, "{text}")?;
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["critlat"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn con_of_m3() {
        let (code, out, _) = call(&["con", "M:3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("simple: true, |Con| = 2"));
    }

    #[test]
    fn unknown_verb_is_a_parse_error() {
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn crit_gate_exit_codes() {
        assert_eq!(call(&["crit-gate", "M:4", "M:3", "--json"]).0, 3);
        assert_eq!(call(&["crit-gate", "M:3", "M:4"]).0, 0);
    }

    #[test]
    fn missing_file() {
        let (code, _, err) = call(&["validate", "/nonexistent/x.lat"]);
        assert_eq!(code, 2);
        assert!(err.contains("Io"));
    }
}
