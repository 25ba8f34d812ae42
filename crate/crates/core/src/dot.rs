//! Graphviz renderings of Hasse diagrams and lattice diagrams.

use std::fmt::Write;

use crate::diagram::LatticeDiagram;
use crate::lattice::FiniteLattice;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn hasse_body(out: &mut String, l: &FiniteLattice, prefix: &str, indent: &str) {
    let id = |x: usize| quote(&format!("{prefix}{x}"));
    for h in 0..=l.length() {
        let row: Vec<String> = l.elements().filter(|&x| l.height(x) == h).map(id).collect();
        let _ = writeln!(out, "{indent}{{ rank=same; {} }}", row.join("; "));
    }
    for x in l.elements() {
        let _ = writeln!(out, "{indent}{} [label={}];", id(x), quote(l.label(x)));
    }
    for &(a, b) in l.covers() {
        let _ = writeln!(out, "{indent}{} -> {};", id(a), id(b));
    }
}

/// One node per element and one edge per cover, ranked by height.
pub fn hasse_dot(l: &FiniteLattice) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n  edge [arrowhead=none];\n", quote(l.name()));
    hasse_body(&mut out, l, "e", "  ");
    out.push_str("}\n");
    out
}

/// One cluster per node holding its Hasse diagram, and one labeled edge per
/// covering pair of the index poset, drawn between the cluster bottoms.
/// Untabled product nodes are drawn as a single box.
pub fn diagram_dot(d: &LatticeDiagram) -> String {
    let p = d.poset();
    let mut out = String::from("digraph diagram {\n  rankdir=BT;\n  compound=true;\n");
    for i in 0..p.len() {
        let node = d.node(i);
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label={};", quote(p.name(i)));
        match node.table() {
            Some(l) => {
                out.push_str("    edge [arrowhead=none];\n");
                hasse_body(&mut out, l, &format!("n{i}e"), "    ");
            }
            None => {
                let _ = writeln!(
                    out,
                    "    \"n{i}e0\" [shape=box, label={}];",
                    quote(&format!("{} ({} elements)", node.name(), node.len()))
                );
            }
        }
        out.push_str("  }\n");
    }
    let anchor = |k: usize| d.node(k).table().map_or(0, |l| l.bottom());
    for (i, j) in p.covers() {
        let (a, b) = (anchor(i), anchor(j));
        let _ = writeln!(
            out,
            "  \"n{i}e{a}\" -> \"n{j}e{b}\" [ltail=cluster_{i}, lhead=cluster_{j}, style=dashed, label={}];",
            quote(&format!("{} → {}", p.name(i), p.name(j)))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::diagram::chain_diagram;
    use std::sync::Arc;

    #[test]
    fn hasse_has_one_edge_per_cover() {
        let l = builtin::m(3);
        let dot = hasse_dot(&l);
        assert_eq!(dot.matches(" -> ").count(), 6);
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert_eq!(dot, hasse_dot(&l));
    }

    #[test]
    fn diagram_clusters() {
        let l = Arc::new(builtin::m(3));
        let (d, _) = chain_diagram(&l, &[vec![0, 1, 4], vec![0, 2, 4]]).unwrap();
        let dot = diagram_dot(&d);
        assert_eq!(dot.matches("subgraph cluster_").count(), d.poset().len());
        assert_eq!(dot.matches("style=dashed").count(), d.poset().covers().len());
    }
}
