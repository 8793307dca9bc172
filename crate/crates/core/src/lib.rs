//! Exact intersection-theoretic toolkit for surfaces with big anticanonical
//! class and the log del Pezzo pairs they carry.

pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod lattice;
pub mod pairs;
pub mod report;
pub mod singular;
pub mod surface;
pub mod zariski;

pub use error::{Error, Result};
