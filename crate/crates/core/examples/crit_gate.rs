//! Deciding whether a critical point is infinite or at most aleph 2.

use std::sync::Arc;

use critlat::builtin;
use critlat::critpoint::{conc_class_report, crit_gate};
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    let pairs = [
        (builtin::m(4), builtin::m(3)),
        (builtin::m(3), builtin::m(5)),
        (builtin::m(3), builtin::two()),
        (builtin::n5(), builtin::n5().dual()),
    ];
    for (k, l) in pairs {
        let (k, l) = (Arc::new(k), Arc::new(l));
        let v = crit_gate(&k, &l, &budget)?;
        println!("crit(Var {}, Var {}): {}", k.name(), l.name(), v.verdict.as_str());
        println!("    {}", v.justification);
    }

    let r = conc_class_report(&Arc::new(builtin::chain(2)), &Arc::new(builtin::chain(3)), &budget)?;
    println!("chain(2) vs chain(3): {:?}, isomorphic: {}", r.relation, r.isomorphic);
    Ok(())
}
