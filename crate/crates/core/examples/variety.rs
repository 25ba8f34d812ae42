//! Subdirectly irreducible quotients, HS membership and variety containment.

use std::sync::Arc;

use critlat::builtin;
use critlat::variety::{hs_member, si_quotients, var_leq};
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    let b2 = Arc::new(builtin::boolean(2));
    for q in si_quotients(&b2, &budget)? {
        println!("{} / {} has {} elements", b2.name(), q.theta.render(), q.quotient.len());
    }

    let n5 = Arc::new(builtin::n5());
    let two = builtin::two();
    if let Some(w) = hs_member(&two, &n5, &budget)? {
        let labels: Vec<&str> = w.sublattice.iter().map(|&x| n5.label(x)).collect();
        println!("2 ∈ HS(N5) via sublattice {{{}}} and {}", labels.join(","), w.theta.render());
    }

    for (k, l) in [(builtin::m(3), builtin::m(4)), (builtin::m(4), builtin::m(3)), (builtin::m(3), builtin::n5())] {
        let (k, l) = (Arc::new(k), Arc::new(l));
        let r = var_leq(&k, &l, &budget)?;
        println!("Var {} ⊆ Var {}: {}", k.name(), l.name(), r.holds);
    }
    Ok(())
}
