//! Counting algebraic numbers of bounded height in plane regions and
//! computing their limiting correlation density.

pub mod arith;
pub mod counting;
pub mod density;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod poly;
pub mod precision;
pub mod qmc;
pub mod regions;
pub mod roots;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
