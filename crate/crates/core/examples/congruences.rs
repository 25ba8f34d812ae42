//! Congruence lattices, principal congruences and quotients.

use std::sync::Arc;

use critlat::builtin;
use critlat::congruence::{con_lattice, principal_congruence, quotient};
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    for l in [builtin::m(3), builtin::n5(), builtin::chain(3), builtin::boolean(2)] {
        let l = Arc::new(l);
        let con = con_lattice(&l, &budget)?;
        let b = con.is_boolean();
        println!("{}: |Con| = {}, boolean: {}, atoms: {}", l.name(), con.len(), b.is_boolean, b.atoms.len());
        for c in con.members() {
            println!("    {}", c.render());
        }
    }

    let n5 = Arc::new(builtin::n5());
    let (x1, x2) = (n5.elem_or_err("x1")?, n5.elem_or_err("x2")?);
    let theta = principal_congruence(&n5, x1, x2);
    let (q, _) = quotient(&theta)?;
    println!("N5 / Θ(x1, x2) = {} with {} elements", theta.render(), q.len());
    Ok(())
}
