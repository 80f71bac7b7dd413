//! Exact computation for rough convergence on vector lattices.
//!
//! The crate works over three concrete Riesz spaces — coordinatewise
//! rational vectors, the lexicographic rational plane, and continuous
//! piecewise-linear functions on `[0,1]` — and over symbolic
//! naturally-indexed sequences. Every verdict it produces (convergence
//! checks, rough-convergence certificates, rough limit-point sets) is
//! decided in exact rational arithmetic; there is no floating point
//! anywhere.

pub mod error;
pub mod exact;
pub mod lattice;
pub mod conv;
pub mod net;
pub mod oracle;
pub mod rough;

pub use error::{Error, Result};
