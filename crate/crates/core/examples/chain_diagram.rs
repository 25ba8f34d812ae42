//! The chain diagram of a partial sublattice and its index poset.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::chain_diagram_of_partial;
use critlat::sublattice::induced_partial_sublattice;

fn main() -> critlat::Result<()> {
    let m3 = Arc::new(builtin::m(3));
    let k = induced_partial_sublattice(&m3, &m3.elements().collect::<Vec<_>>())?;
    let (d, index) = chain_diagram_of_partial(&k)?;
    for c in index.chains() {
        println!("chain {}", c.name());
    }
    let p = d.poset();
    for i in 0..p.len() {
        let node = d.node(i);
        println!("{:<20} {} elements, distributive: {}", p.name(i), node.len(), node.is_distributive());
    }
    println!("JC = {:?}", index.jc_names());
    d.verify()?;
    println!("all {} transition maps commute", p.pairs().len());
    Ok(())
}
