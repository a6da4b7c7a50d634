//! Resource bounds shared by every exhaustive enumeration.

use std::env;

/// Environment variable overriding [`DEFAULT_POSET_CAP`].
pub const POSET_CAP_ENV: &str = "UKRUSKAL_POSET_CAP";

pub const DEFAULT_POSET_CAP: usize = 6;

/// Largest poset an exhaustive enumeration may range over.
pub fn poset_cap() -> usize {
    env::var(POSET_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_POSET_CAP)
}

/// Vertex bound of the brute-force tree embedding search.
pub const TREE_ORACLE_VERTICES: usize = 8;
