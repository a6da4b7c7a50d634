//! Finite partial orders and the basic constructions on them.
//!
//! A [`FinPoset`] on `k` elements is the set `{0, ..., k-1}` with a reflexive,
//! antisymmetric, transitive relation stored as a dense boolean matrix.
//! Values are immutable and cheap to clone.

pub(crate) mod canonical;
mod maps;
mod ordinal;
mod seq;

pub use canonical::{
    all_canonical, automorphisms, bijective_quasi_embeddings, canonical_form, induced_suborder, CanonicalPoset, QeMap,
    ShapeId, SubsetEnum,
};
pub use maps::{enumerate_maps, morphism_checks, pointwise_leq, MapKind, OrderMap};
pub use ordinal::{ord_cmp, ord_leq, OrdTerm, MAX_LEVEL};
pub use seq::{higman_leq, higman_leq_by};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinPoset {
    size: usize,
    rel: Arc<[bool]>,
}

impl FinPoset {
    /// Builds a poset from its non-reflexive related pairs `(i, j)` meaning
    /// `i <= j`. The pairs must already be transitively closed.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = vec![false; size * size];
        for i in 0..size {
            rel[i * size + i] = true;
        }
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= size {
                    return Err(Error::OutOfRange { index, size });
                }
            }
            rel[i * size + j] = true;
        }
        Self::from_matrix(size, rel)
    }

    pub fn from_fn(size: usize, mut le: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut rel = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                rel.push(le(i, j));
            }
        }
        Self::from_matrix(size, rel)
    }

    pub fn from_matrix(size: usize, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != size * size {
            return Err(Error::Mismatch(format!(
                "matrix of length {} for {} elements",
                rel.len(),
                size
            )));
        }
        let p = Self::from_matrix_unchecked(size, rel);
        p.check()?;
        Ok(p)
    }

    pub(crate) fn from_matrix_unchecked(size: usize, rel: Vec<bool>) -> Self {
        FinPoset { size, rel: rel.into() }
    }

    pub fn empty() -> Self {
        Self::antichain(0)
    }

    pub fn chain(n: usize) -> Self {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                rel[i * n + j] = true;
            }
        }
        Self::from_matrix_unchecked(n, rel)
    }

    pub fn antichain(n: usize) -> Self {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        Self::from_matrix_unchecked(n, rel)
    }

    /// Checks the partial-order axioms, naming a witness on failure.
    pub fn check(&self) -> Result<()> {
        let n = self.size;
        for i in 0..n {
            if !self.le(i, i) {
                return Err(Error::NotPartialOrder(format!("{i} <= {i} fails")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.le(i, j) && self.le(j, i) {
                    return Err(Error::NotPartialOrder(format!("antisymmetry fails for {i} and {j}")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.le(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.le(j, k) && !self.le(i, k) {
                        return Err(Error::NotPartialOrder(format!(
                            "transitivity fails: {i} <= {j} <= {k} but not {i} <= {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.size + j]
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    #[cfg(test)]
    pub(crate) fn matrix(&self) -> &[bool] {
        &self.rel
    }

    /// Number of elements above `i`, including `i` itself.
    pub fn up_count(&self, i: usize) -> usize {
        (0..self.size).filter(|&j| self.le(i, j)).count()
    }

    /// All related pairs `(i, j)` with `i != j` and `i <= j`, row-major.
    pub fn related_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && self.le(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The suborder on `elems`, relabeled so that `elems[k]` becomes `k`.
    pub fn induced(&self, elems: &[usize]) -> FinPoset {
        let k = elems.len();
        let mut rel = Vec::with_capacity(k * k);
        for &a in elems {
            for &b in elems {
                rel.push(self.le(a, b));
            }
        }
        Self::from_matrix_unchecked(k, rel)
    }

    /// Relabels by a permutation: element `i` of the result is `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> FinPoset {
        self.induced(order)
    }

    pub fn dual(&self) -> FinPoset {
        let n = self.size;
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = self.le(j, i);
            }
        }
        Self::from_matrix_unchecked(n, rel)
    }

    /// Componentwise order on `self x other`; the pair `(i, j)` is `i * |other| + j`.
    pub fn product(&self, other: &FinPoset) -> FinPoset {
        let (n, m) = (self.size, other.size);
        let total = n * m;
        let mut rel = vec![false; total * total];
        for a in 0..total {
            for b in 0..total {
                rel[a * total + b] = self.le(a / m, b / m) && other.le(a % m, b % m);
            }
        }
        Self::from_matrix_unchecked(total, rel)
    }

    /// Lexicographic product `self x 2` in which `(y, 0) < (y, 1)` and
    /// `(y, i) < (y', j)` whenever `y < y'`. The pair `(y, i)` is `2 * y + i`.
    pub fn lex_times_two(&self) -> FinPoset {
        let n = self.size;
        let total = 2 * n;
        let mut rel = vec![false; total * total];
        for a in 0..total {
            for b in 0..total {
                let (ya, ia) = (a / 2, a % 2);
                let (yb, ib) = (b / 2, b % 2);
                rel[a * total + b] = if ya == yb { ia <= ib } else { self.lt(ya, yb) };
            }
        }
        Self::from_matrix_unchecked(total, rel)
    }
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinPoset({}; {:?})", self.size, self.related_pairs())
    }
}

/// Disjoint sum of `parts`; a part flagged in `reversed` contributes its dual.
/// Elements of different parts are incomparable. The elements of part `p`
/// occupy a contiguous block, in order.
pub fn sum_order(parts: &[FinPoset], reversed: &[bool]) -> FinPoset {
    assert_eq!(parts.len(), reversed.len(), "one reversal flag per part");
    let total: usize = parts.iter().map(FinPoset::size).sum();
    let mut rel = vec![false; total * total];
    let mut offset = 0;
    for (part, &rev) in parts.iter().zip(reversed) {
        let n = part.size();
        for i in 0..n {
            for j in 0..n {
                let le = if rev { part.le(j, i) } else { part.le(i, j) };
                rel[(offset + i) * total + offset + j] = le;
            }
        }
        offset += n;
    }
    FinPoset::from_matrix_unchecked(total, rel)
}

/// The wire form of a poset: `{"size": k, "leq": [[i, j], ...]}` listing the
/// non-reflexive related pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub size: usize,
    pub leq: Vec<[usize; 2]>,
}

impl From<&FinPoset> for PosetFile {
    fn from(p: &FinPoset) -> Self {
        PosetFile {
            size: p.size(),
            leq: p.related_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<&PosetFile> for FinPoset {
    type Error = Error;

    fn try_from(file: &PosetFile) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = file.leq.iter().map(|&[i, j]| (i, j)).collect();
        FinPoset::from_pairs(file.size, &pairs)
    }
}

impl FinPoset {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PosetFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        FinPoset::try_from(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PosetFile::from(self)).expect("poset serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_transitive() {
        let err = FinPoset::from_pairs(3, &[(0, 1), (1, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotPartialOrder(_)));
    }

    #[test]
    fn rejects_cycle() {
        let err = FinPoset::from_pairs(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotPartialOrder(_)));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            FinPoset::from_pairs(2, &[(0, 2)]),
            Err(Error::OutOfRange { index: 2, size: 2 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = FinPoset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        let text = p.to_json();
        assert_eq!(text, r#"{"size":3,"leq":[[0,2],[1,2]]}"#);
        assert_eq!(FinPoset::from_json(&text).unwrap(), p);
        assert!(FinPoset::from_json(r#"{"size":2,"leq":[[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn sum_of_one_part_is_a_copy() {
        let c = FinPoset::chain(3);
        assert_eq!(sum_order(std::slice::from_ref(&c), &[false]), c);
    }

    #[test]
    fn sum_with_reversed_chain() {
        let c = FinPoset::chain(2);
        let s = sum_order(&[c.clone(), c], &[false, true]);
        assert_eq!(s.size(), 4);
        assert_eq!(s.related_pairs(), vec![(0, 1), (3, 2)]);
    }

    #[test]
    fn sum_matching_the_antichain_construction() {
        let z = FinPoset::chain(3);
        let y = sum_order(&[z.clone(), z, FinPoset::antichain(2)], &[false, true, false]);
        assert_eq!(y.size(), 8);
        y.check().unwrap();
        let block = |i: usize| match i {
            0..=2 => 0,
            3..=5 => 1,
            _ => 2,
        };
        for (i, j) in y.related_pairs() {
            assert_eq!(block(i), block(j));
        }
        assert!(y.lt(0, 2));
        assert!(y.lt(5, 3));
        assert!(!y.comparable(6, 7));
    }

    #[test]
    fn lex_times_two_orders_copies() {
        let y = FinPoset::chain(2).lex_times_two();
        y.check().unwrap();
        // (0,0) < (0,1) < (1,0) < (1,1)
        assert!(y.lt(0, 1) && y.lt(1, 2) && y.lt(2, 3));
        let a = FinPoset::antichain(2).lex_times_two();
        assert!(a.lt(0, 1) && !a.comparable(1, 2));
    }
}
