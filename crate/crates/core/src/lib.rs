//! Log-unit lattices of number fields and the group-ring forms attached to
//! them.

pub mod bundle;
pub mod elimination;
pub mod error;
pub mod field;
pub mod galois;
pub mod group;
pub mod lab;
pub mod lattice;
pub mod numeric;

pub use error::{Error, Result};
