//! Graphviz output for a Hasse diagram and a chain diagram.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::chain_diagram;
use critlat::dot::{diagram_dot, hasse_dot};

fn main() -> critlat::Result<()> {
    print!("{}", hasse_dot(&builtin::f22()));
    let m3 = Arc::new(builtin::m(3));
    let (d, _) = chain_diagram(&m3, &[vec![0, 1, 4], vec![0, 2, 4]])?;
    print!("{}", diagram_dot(&d));
    Ok(())
}
