//! Canonical representatives of isomorphism classes of finite posets.
//!
//! The canonical labeling of a poset is the one whose row-major `leq` matrix
//! is lexicographically greatest; among labelings reaching that matrix the
//! lexicographically least relabeling wins. Chains come out as `0 < 1 < ...`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use dashmap::DashMap;

use super::FinPoset;
use crate::error::{Error, Result};

pub type ShapeId = u32;

/// A poset in canonical form, interned so that equality is an id comparison.
#[derive(Clone)]
pub struct CanonicalPoset {
    id: ShapeId,
    poset: FinPoset,
}

impl CanonicalPoset {
    #[inline]
    pub fn id(&self) -> ShapeId {
        self.id
    }

    #[inline]
    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.poset.size()
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.poset.le(i, j)
    }

    pub fn from_id(id: ShapeId) -> CanonicalPoset {
        let poset = interner().read().unwrap().list[id as usize].clone();
        CanonicalPoset { id, poset }
    }

    /// Interns `p`, which must already be canonical.
    pub fn from_canonical(p: FinPoset) -> Result<CanonicalPoset> {
        let (c, _) = canonical_form(&p);
        if c.poset != p {
            return Err(Error::Mismatch(format!(
                "poset {:?} is not in canonical form",
                p.related_pairs()
            )));
        }
        Ok(c)
    }

    pub fn empty() -> CanonicalPoset {
        canonical_form(&FinPoset::empty()).0
    }

    pub fn chain(n: usize) -> CanonicalPoset {
        canonical_form(&FinPoset::chain(n)).0
    }

    pub fn antichain(n: usize) -> CanonicalPoset {
        canonical_form(&FinPoset::antichain(n)).0
    }

    /// A compact printable name: size, then the off-diagonal matrix bits in hex.
    pub fn code(&self) -> String {
        let n = self.size();
        let mut bits = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    bits.push(self.le(i, j));
                }
            }
        }
        let mut out = format!("{n}p");
        for chunk in bits.chunks(4) {
            let mut v = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                if b {
                    v |= 8 >> k;
                }
            }
            out.push(char::from_digit(v as u32, 16).unwrap());
        }
        out
    }

    pub fn from_code(code: &str) -> Result<CanonicalPoset> {
        let bad = || Error::Parse(format!("bad shape code {code:?}"));
        let (n, hex) = code.split_once('p').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut bits = Vec::new();
        for ch in hex.chars() {
            let v = ch.to_digit(16).ok_or_else(bad)?;
            for k in 0..4 {
                bits.push(v & (8 >> k) != 0);
            }
        }
        let off = n * n.saturating_sub(1);
        if bits.len() != off.div_ceil(4) * 4 || bits[off..].iter().any(|&b| b) {
            return Err(bad());
        }
        let mut rel = vec![false; n * n];
        let mut it = bits.into_iter();
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = i == j || it.next().unwrap();
            }
        }
        Self::from_canonical(FinPoset::from_matrix(n, rel)?)
    }
}

impl PartialEq for CanonicalPoset {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for CanonicalPoset {}

impl Hash for CanonicalPoset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for CanonicalPoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalPoset {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.id == other.id {
            Ordering::Equal
        } else {
            self.poset.cmp(&other.poset)
        }
    }
}

impl fmt::Debug for CanonicalPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl fmt::Display for CanonicalPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Default)]
struct Interner {
    map: HashMap<FinPoset, ShapeId>,
    list: Vec<FinPoset>,
}

fn interner() -> &'static RwLock<Interner> {
    static I: OnceLock<RwLock<Interner>> = OnceLock::new();
    I.get_or_init(Default::default)
}

fn intern(p: FinPoset) -> CanonicalPoset {
    if let Some(&id) = interner().read().unwrap().map.get(&p) {
        return CanonicalPoset { id, poset: p };
    }
    let mut w = interner().write().unwrap();
    let next = w.list.len() as ShapeId;
    let id = *w.map.entry(p.clone()).or_insert(next);
    if id == next {
        w.list.push(p.clone());
    }
    CanonicalPoset { id, poset: p }
}

type CanonEntry = (CanonicalPoset, Arc<[usize]>);

fn canon_memo() -> &'static DashMap<FinPoset, CanonEntry> {
    static M: OnceLock<DashMap<FinPoset, CanonEntry>> = OnceLock::new();
    M.get_or_init(DashMap::new)
}

/// Canonical form of `p` together with the labeling `order`: canonical
/// element `i` corresponds to element `order[i]` of `p`, so `order` is an
/// isomorphism from the canonical poset onto `p`.
pub fn canonical_form(p: &FinPoset) -> (CanonicalPoset, Arc<[usize]>) {
    if let Some(hit) = canon_memo().get(p) {
        return hit.clone();
    }
    let order = search(p);
    let c = intern(p.permuted(&order));
    let entry = (c, Arc::from(order));
    canon_memo().insert(p.clone(), entry.clone());
    entry
}

fn small_memo() -> &'static DashMap<(u8, u64), CanonEntry> {
    static M: OnceLock<DashMap<(u8, u64), CanonEntry>> = OnceLock::new();
    M.get_or_init(DashMap::new)
}

/// [`canonical_form`] of the suborder on at most 8 elements, keyed by its
/// relation packed into one word.
fn small_canonical_form(host: &FinPoset, elems: &[usize]) -> CanonEntry {
    let mut bits = 0u64;
    for (a, &x) in elems.iter().enumerate() {
        for (b, &y) in elems.iter().enumerate() {
            if host.le(x, y) {
                bits |= 1 << (a * 8 + b);
            }
        }
    }
    let key = (elems.len() as u8, bits);
    if let Some(hit) = small_memo().get(&key) {
        return hit.clone();
    }
    let entry = canonical_form(&host.induced(elems));
    small_memo().insert(key, entry.clone());
    entry
}

struct Search<'a> {
    p: &'a FinPoset,
    k: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl Search<'_> {
    fn row_bound(&self, x: usize, depth: usize, row: &mut Vec<bool>) {
        row.clear();
        for c in 0..depth {
            row.push(self.p.le(x, self.order[c]));
        }
        let ones = (0..self.k).filter(|&y| !self.used[y] && self.p.le(x, y)).count();
        row.extend(std::iter::repeat_n(true, ones));
        row.resize(self.k, false);
    }

    /// Compares an upper bound on every completion against the incumbent.
    fn bound_vs_best(&self, depth: usize) -> Ordering {
        let Some((best, _)) = &self.best else {
            return Ordering::Greater;
        };
        let k = self.k;
        let mut row = Vec::with_capacity(k);
        let mut cand = Vec::with_capacity(k);
        let mut free_best: Option<Vec<bool>> = None;
        for r in 0..k {
            let ub: &[bool] = if r < depth {
                self.row_bound(self.order[r], depth, &mut row);
                &row
            } else {
                if free_best.is_none() {
                    let mut top: Option<Vec<bool>> = None;
                    for x in (0..k).filter(|&x| !self.used[x]) {
                        self.row_bound(x, depth, &mut cand);
                        if top.as_ref().is_none_or(|t| cand > *t) {
                            top = Some(cand.clone());
                        }
                    }
                    free_best = top;
                }
                free_best.as_deref().unwrap()
            };
            match ub.cmp(&best[r * k..(r + 1) * k]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    fn dfs(&mut self, depth: usize) {
        if depth == self.k {
            let m: Vec<bool> = (0..self.k * self.k)
                .map(|i| self.p.le(self.order[i / self.k], self.order[i % self.k]))
                .collect();
            if self.best.as_ref().is_none_or(|(b, _)| m > *b) {
                self.best = Some((m, self.order.clone()));
            }
            return;
        }
        for x in 0..self.k {
            if self.used[x] {
                continue;
            }
            self.used[x] = true;
            self.order.push(x);
            if self.bound_vs_best(depth + 1) == Ordering::Greater {
                self.dfs(depth + 1);
            }
            self.order.pop();
            self.used[x] = false;
        }
    }
}

fn search(p: &FinPoset) -> Vec<usize> {
    let k = p.size();
    let mut s = Search {
        p,
        k,
        order: Vec::with_capacity(k),
        used: vec![false; k],
        best: None,
    };
    s.dfs(0);
    s.best.map(|(_, o)| o).unwrap_or_default()
}

/// A subset `a` of a host together with its canonical shape `|a|` and the
/// fixed enumeration `en: |a| -> a` (`en[i]` is a host element).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetEnum {
    pub shape: CanonicalPoset,
    pub en: Vec<usize>,
}

impl SubsetEnum {
    /// The members of `a` in increasing host order.
    pub fn members(&self) -> Vec<usize> {
        let mut m = self.en.clone();
        m.sort_unstable();
        m
    }

    /// Position of host element `x` under `en`, if it is a member.
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.en.iter().position(|&e| e == x)
    }
}

/// The induced suborder on `a` with the deterministic enumeration: among all
/// isomorphisms `|a| -> a` the one whose tuple of host indices is least.
pub fn induced_suborder(host: &FinPoset, a: &[usize]) -> Result<SubsetEnum> {
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != a.len() {
        return Err(Error::Precondition("subset lists an element twice".into()));
    }
    if let Some(&x) = sorted.iter().find(|&&x| x >= host.size()) {
        return Err(Error::OutOfRange {
            index: x,
            size: host.size(),
        });
    }
    Ok(induced_sorted(host, &sorted))
}

/// As [`induced_suborder`] for a sorted, duplicate-free, in-range `a`.
pub(crate) fn induced_sorted(host: &FinPoset, sorted: &[usize]) -> SubsetEnum {
    let (shape, order) = if sorted.len() <= 8 {
        small_canonical_form(host, sorted)
    } else {
        canonical_form(&host.induced(sorted))
    };
    SubsetEnum {
        shape,
        en: order.iter().map(|&i| sorted[i]).collect(),
    }
}

/// A bijective quasi-embedding from a canonical shape onto another canonical
/// shape of the same size; `map[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QeMap {
    pub to: CanonicalPoset,
    pub map: Vec<usize>,
}

fn qe_memo() -> &'static DashMap<ShapeId, Arc<Vec<QeMap>>> {
    static M: OnceLock<DashMap<ShapeId, Arc<Vec<QeMap>>>> = OnceLock::new();
    M.get_or_init(DashMap::new)
}

/// All bijective quasi-embeddings out of `c` into canonical shapes, sorted
/// by target then by map. Automorphisms are the entries with `to == c`.
pub fn bijective_quasi_embeddings(c: &CanonicalPoset) -> Arc<Vec<QeMap>> {
    if let Some(hit) = qe_memo().get(&c.id()) {
        return hit.clone();
    }
    let k = c.size();
    let mut out = Vec::new();
    let targets = all_canonical(k);
    let mut perm: Vec<usize> = (0..k).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    for to in targets.iter() {
        for p in &perms {
            let reflects = (0..k).all(|i| (0..k).all(|j| !to.le(p[i], p[j]) || c.le(i, j)));
            if reflects {
                out.push(QeMap {
                    to: to.clone(),
                    map: p.clone(),
                });
            }
        }
    }
    out.sort();
    let out = Arc::new(out);
    qe_memo().insert(c.id(), out.clone());
    out
}

/// Automorphisms of `c`, identity first.
pub fn automorphisms(c: &CanonicalPoset) -> Vec<Vec<usize>> {
    bijective_quasi_embeddings(c)
        .iter()
        .filter(|q| q.to == *c)
        .map(|q| q.map.clone())
        .collect()
}

fn permutations(perm: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == perm.len() {
        out.push(perm.clone());
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permutations(perm, i + 1, out);
        perm.swap(i, j);
    }
    if i == 0 {
        out.sort();
    }
}

/// All permutations of `0..k` in lexicographic order.
#[cfg(test)]
pub(crate) fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    permutations(&mut perm, 0, &mut out);
    out
}

fn all_memo() -> &'static DashMap<usize, Arc<Vec<CanonicalPoset>>> {
    static M: OnceLock<DashMap<usize, Arc<Vec<CanonicalPoset>>>> = OnceLock::new();
    M.get_or_init(DashMap::new)
}

/// Every canonical poset with `k` elements, sorted.
pub fn all_canonical(k: usize) -> Arc<Vec<CanonicalPoset>> {
    if let Some(hit) = all_memo().get(&k) {
        return hit.clone();
    }
    let out = if k == 0 {
        vec![CanonicalPoset::empty()]
    } else {
        // Each poset on k elements is a poset on k-1 elements plus a maximal
        // element sitting above a down-closed set.
        let mut seen = std::collections::BTreeSet::new();
        for base in all_canonical(k - 1).iter() {
            let b = base.poset();
            let m = k - 1;
            for mask in 0u32..(1 << m) {
                let down_closed =
                    (0..m).all(|j| mask & (1 << j) == 0 || (0..m).all(|i| !b.le(i, j) || mask & (1 << i) != 0));
                if !down_closed {
                    continue;
                }
                let mut rel = vec![false; k * k];
                for i in 0..m {
                    for j in 0..m {
                        rel[i * k + j] = b.le(i, j);
                    }
                    rel[i * k + m] = mask & (1 << i) != 0;
                }
                rel[m * k + m] = true;
                let p = FinPoset::from_matrix_unchecked(k, rel);
                seen.insert(canonical_form(&p).0);
            }
        }
        seen.into_iter().collect()
    };
    let out = Arc::new(out);
    all_memo().insert(k, out.clone());
    out
}
