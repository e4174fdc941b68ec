//! Recovery of a confining radial potential `q(r) = r + p(r)` from finitely
//! many bound-state energies and eigenfunction slopes at the origin.

pub mod baseline;
pub mod error;
pub mod glinvert;
pub mod methods;
pub mod models;
pub mod specfun;
pub mod sturm;

pub use error::{Error, Result};
