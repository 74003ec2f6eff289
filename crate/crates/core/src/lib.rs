//! Exact computation of n-point functions on integrable modules over the infinite-rank
//! Lie algebras of types A, B, C, D, with a fermionic Fock-space oracle.

pub mod cache;
pub mod characters;
pub mod combinat;
pub mod correlators;
pub mod error;
pub mod fock;
pub mod laurent;
pub mod qseries;
pub mod ring;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
