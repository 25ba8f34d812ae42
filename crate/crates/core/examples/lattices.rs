//! Builtin lattices, lattice files, duals and isomorphisms.

use critlat::builtin;
use critlat::io::{lattice_from_str, lattice_to_string};
use critlat::iso::{find_isomorphism, is_isomorphic_or_dual};

fn main() -> critlat::Result<()> {
    let f22 = builtin::f22();
    println!("{} has {} elements and length {}", f22.name(), f22.len(), f22.length());
    println!("distributive: {}, modular: {}", f22.is_distributive(), f22.is_modular());

    let text = lattice_to_string(&builtin::n5());
    let back = lattice_from_str(&text)?;
    println!("N5 survives a file round trip: {}", back == builtin::n5());

    let dual = f22.dual();
    println!("F22 is self-dual: {}", find_isomorphism(&f22, &dual).is_some());
    println!("chain(3) is isomorphic or dual to its dual: {}", is_isomorphic_or_dual(&builtin::chain(3), &builtin::chain(3).dual()));
    Ok(())
}
