//! A congruence chain built from a map with two retractions.

use std::sync::Arc;

use critlat::lifting::retraction_congruence_chain;
use critlat::{builtin, product, Budget, Homomorphism};

fn main() -> critlat::Result<()> {
    let two = Arc::new(builtin::two());
    let (square, proj) = product(&[two.clone(), two.clone()], 16)?;
    let diagonal = Homomorphism::new(two, square.clone(), vec![0, 3])?;
    let r = retraction_congruence_chain(&diagonal, &proj[0], &proj[1], &Budget::default())?;
    println!("chain: {}", r.witness.labels.join(" < "));
    println!("step congruences: {:?}, retractions swapped: {}", r.betas, r.swapped);
    Ok(())
}
