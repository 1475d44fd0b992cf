//! Exact-arithmetic verification engine for the tensor, Clifford algebra and
//! graded differential algebra identities of an Einstein-Cartan-Dirac
//! frame-bundle formulation. Everything is computed over the rationals (or
//! complex rationals); a check passes only when its residual is exactly zero.

pub mod algebra;
pub mod clifford;
pub mod dga;
pub mod exterior;
pub mod fieldeq;
pub mod geometry;
pub mod linalg;
pub mod scalar;
pub mod state_io;
pub mod suite;
