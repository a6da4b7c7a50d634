//! Size profiles: every bound the suite uses, in one place.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    pub name: &'static str,
    /// Largest host for dilator semantics, the product embedding and bad
    /// sequence searches.
    pub host: usize,
    /// Uniform bound handed to dilator validation.
    pub validate: usize,
    /// Uniform bound for validating transformed dilators, whose checks grow
    /// fastest.
    pub prime_validate: usize,
    /// Height and count caps for term enumeration.
    pub term_height: usize,
    pub term_max: usize,
    /// Vertex bound for tree oracle agreement and tree order laws.
    pub tree_vertices: usize,
    /// Vertex bound for the tree-valued bridges.
    pub bridge_vertices: usize,
    /// `i, j, k, l <= gadget` for full trees, `m <= gadget_labels` for labels.
    pub gadget: usize,
    pub gadget_labels: usize,
    /// Longest truncation of the antichain construction.
    pub antichain_len: usize,
    /// Length of the ladder built from a monotonicity witness.
    pub ladder_len: usize,
    /// Level-2 ordinal terms with entries and length up to these.
    pub ordinal_entry: usize,
    pub ordinal_len: usize,
    pub descent_steps: usize,
}

pub const TINY: Profile = Profile {
    name: "tiny",
    host: 2,
    validate: 3,
    prime_validate: 3,
    term_height: 2,
    term_max: 300,
    tree_vertices: 4,
    bridge_vertices: 3,
    gadget: 2,
    gadget_labels: 3,
    antichain_len: 4,
    ladder_len: 3,
    ordinal_entry: 2,
    ordinal_len: 2,
    descent_steps: 6,
};

pub const DEFAULT: Profile = Profile {
    name: "default",
    host: 3,
    validate: 4,
    prime_validate: 4,
    term_height: 3,
    term_max: 2000,
    tree_vertices: 5,
    bridge_vertices: 4,
    gadget: 3,
    gadget_labels: 4,
    antichain_len: 6,
    ladder_len: 5,
    ordinal_entry: 3,
    ordinal_len: 3,
    descent_steps: 12,
};

pub const THOROUGH: Profile = Profile {
    name: "thorough",
    host: 3,
    validate: 6,
    prime_validate: 5,
    term_height: 3,
    term_max: 5000,
    tree_vertices: 6,
    bridge_vertices: 5,
    gadget: 3,
    gadget_labels: 4,
    antichain_len: 8,
    ladder_len: 8,
    ordinal_entry: 3,
    ordinal_len: 4,
    descent_steps: 24,
};

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tiny" => Ok(TINY),
            "default" => Ok(DEFAULT),
            "thorough" => Ok(THOROUGH),
            _ => Err(format!("unknown profile {s:?}, expected tiny, default or thorough")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}
