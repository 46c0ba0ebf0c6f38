//! Exact and verified numerics for the large sieve with quadratic amplitudes.

pub mod acceptance;
pub mod arith;
pub mod bounds;
pub mod error;
pub mod expsum;
pub mod farey;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod report;
pub mod summation;
pub mod sweep;

pub use error::{Error, Result};
