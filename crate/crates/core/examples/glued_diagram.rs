//! Gluing directing diagrams onto a chain diagram.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::glued_diagram;
use critlat::sublattice::induced_partial_sublattice;
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let m3 = Arc::new(builtin::m(3));
    let k = induced_partial_sublattice(&m3, &m3.elements().collect::<Vec<_>>())?;
    let g = glued_diagram(&k, &m3, &Budget::default())?;
    for ((c1, c2, d), n) in g.triples.iter().zip(&g.factor_counts) {
        println!("({c1}, {c2}, {d}) contributes {n} copies of M3");
    }
    let p = g.diagram.poset();
    for i in 0..p.len() {
        let node = g.diagram.node(i);
        println!("{:<20} {} elements", p.name(i), node.len());
    }
    Ok(())
}
