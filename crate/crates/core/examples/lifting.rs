//! Liftings of a chain diagram: verification and the extracted embedding.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::chain_diagram_of_partial;
use critlat::lifting::{extract_embedding_either, verify_lifting, Lifting};
use critlat::sublattice::induced_partial_sublattice;
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    let n5 = Arc::new(builtin::n5());
    let k = induced_partial_sublattice(&n5, &n5.elements().collect::<Vec<_>>())?;
    let (d, index) = chain_diagram_of_partial(&k)?;

    for lifting in [Lifting::identity(&d, &budget)?, Lifting::dual_of(&d, &budget)?] {
        let check = verify_lifting(&lifting, &budget)?;
        println!("lifting valid: {} ({} squares)", check.valid, check.squares_checked);
        let r = extract_embedding_either(&lifting, &index, &k, &budget)?;
        println!("  dualized: {}", r.dualized);
        for (x, y) in r.k_labels.iter().zip(&r.h_labels) {
            println!("  h({x}) = {y}");
        }
        for s in &r.sections {
            println!("  {}: {} checks, passed: {}", s.name, s.checks, s.passed());
        }
    }
    Ok(())
}
