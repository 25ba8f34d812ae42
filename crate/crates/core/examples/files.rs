//! Writing and reading diagram files and lifting bundles.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::chain_diagram_of_partial;
use critlat::io::{diagram_from_str, diagram_to_string, lifting_from_str, lifting_to_string};
use critlat::lifting::{verify_lifting, Lifting};
use critlat::sublattice::induced_partial_sublattice;
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    let m3 = Arc::new(builtin::m(3));
    let k = induced_partial_sublattice(&m3, &m3.elements().collect::<Vec<_>>())?;
    let (d, _) = chain_diagram_of_partial(&k)?;

    let text = diagram_to_string(&d);
    let back = diagram_from_str(&text, &budget)?;
    println!("diagram file: {} bytes, {} nodes read back", text.len(), back.poset().len());

    let bundle = lifting_to_string(&Lifting::dual_of(&d, &budget)?, &d);
    let (lifting, _) = lifting_from_str(&bundle, &budget)?;
    println!("lifting bundle: {} bytes, valid: {}", bundle.len(), verify_lifting(&lifting, &budget)?.valid);
    Ok(())
}
