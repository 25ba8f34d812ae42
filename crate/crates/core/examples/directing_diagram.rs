//! Directing diagrams of M3 and N5 and the directing property under the
//! identity lifting.

use std::sync::Arc;

use critlat::builtin;
use critlat::diagram::{directing_diagram, ChainSpec};
use critlat::lifting::{check_directing_property, Lifting};
use critlat::Budget;

fn main() -> critlat::Result<()> {
    let budget = Budget::default();
    let c1 = ChainSpec::new(["0", "x1", "1"])?;
    let c2 = ChainSpec::new(["0", "x2", "1"])?;
    for c3 in [ChainSpec::new(["0", "x3", "1"])?, ChainSpec::new(["0", "x1", "x2", "1"])?] {
        for kgen in [builtin::m(3), builtin::n5()] {
            let name = kgen.name().to_string();
            let d = match directing_diagram(&Arc::new(kgen), &c1, &c2, &c3, &budget) {
                Ok(d) => d,
                Err(e) => {
                    println!("{name} with C3 = {c3}: {e}");
                    continue;
                }
            };
            let top = d.node_by_name("⊤").expect("top node");
            let lifting = Lifting::identity(&d, &budget)?;
            let empty = d.node_by_name("∅").expect("bottom node");
            let r = check_directing_property(&lifting, &c1, &c2, &c3, empty.bottom(), empty.top(), &budget)?;
            println!(
                "{name} with C3 = {c3}: |top| = {}, {} chains checked, directing: {}",
                top.len(),
                r.chains_checked,
                r.holds
            );
        }
    }
    Ok(())
}
