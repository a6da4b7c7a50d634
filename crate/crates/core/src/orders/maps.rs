use std::fmt;

use super::FinPoset;
use crate::error::{Error, Result};
use crate::limits;

/// A total function between the carriers of two finite posets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderMap {
    domain: FinPoset,
    codomain: FinPoset,
    values: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    None,
    QuasiEmbedding,
    Embedding,
}

impl OrderMap {
    pub fn new(domain: FinPoset, codomain: FinPoset, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::Mismatch(format!(
                "map has {} values for a domain of size {}",
                values.len(),
                domain.size()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= codomain.size()) {
            return Err(Error::OutOfRange {
                index: v,
                size: codomain.size(),
            });
        }
        Ok(OrderMap {
            domain,
            codomain,
            values,
        })
    }

    pub fn identity(p: &FinPoset) -> Self {
        OrderMap {
            domain: p.clone(),
            codomain: p.clone(),
            values: (0..p.size()).collect(),
        }
    }

    pub fn domain(&self) -> &FinPoset {
        &self.domain
    }

    pub fn codomain(&self) -> &FinPoset {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &OrderMap) -> Result<OrderMap> {
        if self.codomain != other.domain {
            return Err(Error::Mismatch("maps are not composable".into()));
        }
        Ok(OrderMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            values: self.values.iter().map(|&x| other.values[x]).collect(),
        })
    }

    pub fn kind(&self) -> MapKind {
        morphism_checks(self)
    }

    pub fn is_quasi_embedding(&self) -> bool {
        self.kind() != MapKind::None
    }
}

impl fmt::Debug for OrderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderMap{:?}", self.values)
    }
}

/// Classifies `f`: a quasi-embedding reflects the order, an embedding also
/// preserves it.
pub fn morphism_checks(f: &OrderMap) -> MapKind {
    let n = f.domain.size();
    let mut preserves = true;
    for i in 0..n {
        for j in 0..n {
            let src = f.domain.le(i, j);
            let dst = f.codomain.le(f.values[i], f.values[j]);
            if dst && !src {
                return MapKind::None;
            }
            if src && !dst {
                preserves = false;
            }
        }
    }
    if preserves {
        MapKind::Embedding
    } else {
        MapKind::QuasiEmbedding
    }
}

/// `f <= g` pointwise in the common codomain.
pub fn pointwise_leq(f: &OrderMap, g: &OrderMap) -> Result<bool> {
    if f.domain != g.domain || f.codomain != g.codomain {
        return Err(Error::Mismatch(
            "pointwise comparison needs equal domains and codomains".into(),
        ));
    }
    Ok(f.values.iter().zip(&g.values).all(|(&x, &y)| f.codomain.le(x, y)))
}

/// All maps `p -> q` of the requested kind (`MapKind::None` is rejected),
/// in lexicographic order of their value tuples.
pub fn enumerate_maps(p: &FinPoset, q: &FinPoset, kind: MapKind) -> Result<Vec<OrderMap>> {
    let cap = limits::poset_cap();
    for size in [p.size(), q.size()] {
        if size > cap {
            return Err(Error::resource("map enumeration", size, cap));
        }
    }
    if kind == MapKind::None {
        return Err(Error::Precondition("enumerate quasi-embeddings or embeddings".into()));
    }
    let mut out = Vec::new();
    let mut values = Vec::with_capacity(p.size());
    let mut used = vec![false; q.size()];
    extend(p, q, kind == MapKind::Embedding, &mut values, &mut used, &mut |v| {
        out.push(OrderMap {
            domain: p.clone(),
            codomain: q.clone(),
            values: v.to_vec(),
        })
    });
    Ok(out)
}

/// Injective backtracking over partial maps; every assigned pair is checked
/// for reflection and, when `embed` is set, for preservation.
pub(crate) fn extend(
    p: &FinPoset,
    q: &FinPoset,
    embed: bool,
    values: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let i = values.len();
    if i == p.size() {
        emit(values);
        return;
    }
    for y in 0..q.size() {
        if used[y] {
            continue;
        }
        let ok = (0..i).all(|j| {
            let yj = values[j];
            let refl = (!q.le(y, yj) || p.le(i, j)) && (!q.le(yj, y) || p.le(j, i));
            let pres = !embed || ((!p.le(i, j) || q.le(y, yj)) && (!p.le(j, i) || q.le(yj, y)));
            refl && pres
        });
        if ok {
            used[y] = true;
            values.push(y);
            extend(p, q, embed, values, used, emit);
            values.pop();
            used[y] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_functions(p: &FinPoset, q: &FinPoset) -> Vec<OrderMap> {
        let (n, m) = (p.size(), q.size());
        let total = m.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut v = vec![0; n];
                for slot in v.iter_mut().rev() {
                    *slot = code % m;
                    code /= m;
                }
                OrderMap::new(p.clone(), q.clone(), v).unwrap()
            })
            .collect()
    }

    fn small_posets() -> Vec<FinPoset> {
        let mut out = Vec::new();
        for k in 0..=3 {
            for c in super::super::all_canonical(k).iter() {
                out.push(c.poset().clone());
            }
        }
        out
    }

    #[test]
    fn identity_is_embedding() {
        let p = FinPoset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(morphism_checks(&OrderMap::identity(&p)), MapKind::Embedding);
    }

    #[test]
    fn constant_on_antichain_is_none() {
        let p = FinPoset::antichain(2);
        let f = OrderMap::new(p.clone(), p, vec![0, 0]).unwrap();
        assert_eq!(morphism_checks(&f), MapKind::None);
    }

    #[test]
    fn chain_into_antichain_is_quasi_embedding() {
        let f = OrderMap::new(FinPoset::chain(2), FinPoset::antichain(2), vec![0, 1]).unwrap();
        assert_eq!(morphism_checks(&f), MapKind::QuasiEmbedding);
        let g = OrderMap::new(FinPoset::antichain(2), FinPoset::chain(2), vec![0, 1]).unwrap();
        assert_eq!(morphism_checks(&g), MapKind::None);
    }

    #[test]
    fn pointwise_examples() {
        let c = FinPoset::chain(3);
        let one = FinPoset::chain(1);
        let f = OrderMap::new(one.clone(), c.clone(), vec![0]).unwrap();
        let g = OrderMap::new(one.clone(), c, vec![2]).unwrap();
        assert!(pointwise_leq(&f, &f).unwrap());
        assert!(pointwise_leq(&f, &g).unwrap());
        assert!(!pointwise_leq(&g, &f).unwrap());
        let a = FinPoset::antichain(2);
        let h = OrderMap::new(one.clone(), a.clone(), vec![0]).unwrap();
        let k = OrderMap::new(one, a, vec![1]).unwrap();
        assert!(!pointwise_leq(&h, &k).unwrap());
        assert!(pointwise_leq(&h, &f).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let (c2, a2) = (FinPoset::chain(2), FinPoset::antichain(2));
        assert!(enumerate_maps(&c2, &a2, MapKind::Embedding).unwrap().is_empty());
        let p = FinPoset::from_pairs(3, &[(0, 2)]).unwrap();
        assert_eq!(
            enumerate_maps(&FinPoset::chain(1), &p, MapKind::Embedding)
                .unwrap()
                .len(),
            3
        );
        let qes = enumerate_maps(&c2, &a2, MapKind::QuasiEmbedding).unwrap();
        assert_eq!(qes.len(), 2);
        assert!(enumerate_maps(&a2, &c2, MapKind::QuasiEmbedding).unwrap().is_empty());
        let big = FinPoset::antichain(limits::poset_cap() + 1);
        assert!(matches!(
            enumerate_maps(&big, &big, MapKind::Embedding),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn enumeration_matches_filtering_all_functions() {
        for p in small_posets() {
            for q in small_posets() {
                let all = all_functions(&p, &q);
                for kind in [MapKind::QuasiEmbedding, MapKind::Embedding] {
                    let want: Vec<_> = all
                        .iter()
                        .filter(|f| match kind {
                            MapKind::Embedding => f.kind() == MapKind::Embedding,
                            _ => f.kind() != MapKind::None,
                        })
                        .cloned()
                        .collect();
                    assert_eq!(enumerate_maps(&p, &q, kind).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn quasi_embeddings_are_injective() {
        let mut posets = small_posets();
        for k in 4..=5 {
            posets.extend(super::super::all_canonical(k).iter().map(|c| c.poset().clone()));
        }
        for p in &posets {
            for q in &posets {
                for f in all_functions(p, q) {
                    if f.kind() != MapKind::None {
                        let mut v = f.values().to_vec();
                        v.sort_unstable();
                        v.dedup();
                        assert_eq!(v.len(), p.size());
                    }
                }
            }
        }
    }
}
