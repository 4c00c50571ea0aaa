//! Construction, verification and bounds for (r, s)-sets: point sets of
//! PG(n, q) meeting every s-dimensional subspace in at most r points.

pub mod error;
pub mod gf;
pub mod projgeom;
pub mod verifier;
pub mod constructions;
pub mod randomized;
pub mod bounds;
pub mod cli;

pub use error::{Error, Result};
