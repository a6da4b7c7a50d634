//! Finite partial orders, coded dilators on them, the term systems of their
//! initial fixed points, labeled trees, and the maps that connect them.

pub mod bridges;
pub mod dilator;
pub mod error;
pub mod falsify;
pub mod fixpoint;
pub mod limits;
pub mod orders;
pub mod trees;

pub use error::{Error, Result};
