//! Correlation functions of bilinear fermion operators.

pub mod closed;
pub mod eval;
pub mod npoint;
pub mod qdim;
pub mod theta;
