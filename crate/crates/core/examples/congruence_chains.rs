//! Congruence chains of lattices with Boolean congruence lattices.

use std::sync::Arc;

use critlat::builtin;
use critlat::congruence::con_lattice;
use critlat::lifting::find_congruence_chains;
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    for l in [builtin::chain(3), builtin::boolean(2), builtin::boolean(3)] {
        let l = Arc::new(l);
        let con = con_lattice(&l, &budget)?;
        let chains = find_congruence_chains(&con, l.bottom(), l.top(), &budget)?;
        println!("{}: {} congruence chains", l.name(), chains.len());
        for w in chains.iter().take(4) {
            println!("    {}", w.labels.join(" < "));
        }
    }
    Ok(())
}
