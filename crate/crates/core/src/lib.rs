//! Finite lattices, their congruences, variety containment, and
//! chain-diagram liftings.

pub mod budget;
pub mod cli;
pub mod congruence;
pub mod critpoint;
pub mod diagram;
pub mod dot;
pub mod builtin;
pub mod error;
pub mod io;
pub mod iso;
pub mod lifting;
pub mod lattice;
pub mod sublattice;
pub mod variety;

pub use budget::Budget;
pub use error::{Error, Result};
pub use lattice::{product, Elem, FiniteLattice, Homomorphism};
