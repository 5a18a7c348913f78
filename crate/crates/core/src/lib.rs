//! Elementary recursive programs over partial structures: parsing, least-fixed-point
//! evaluation, reduction to canonical form, and decision procedures for congruence,
//! intensional equivalence and global equivalence.

pub mod cli;
pub mod congruence;
pub mod error;
pub mod identities;
pub mod intension;
mod matcher;
pub mod propgraph;
pub mod reduction;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
