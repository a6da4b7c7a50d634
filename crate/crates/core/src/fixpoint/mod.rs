//! The initial Kruskal fixed point of a coded dilator as a term system.
//!
//! A term `∘(a, σ)` is a finite set `a` of terms together with a trace token
//! whose shape is the order induced on `a`. Terms are ranked linearly by
//! height, then length, then printed form; this rank orders children and
//! fixes the enumeration of every finite set of terms.
//!
//! Terms are hash-consed inside their [`TermSystem`], so equality of terms
//! from one system is identity of nodes.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::Arc;

use dashmap::DashMap;

use crate::dilator::{CodedDilator, DilElem, TokenIdx};
use crate::error::{Error, Result};
use crate::orders::canonical::induced_sorted;
use crate::orders::{canonical_form, FinPoset};

struct Node {
    id: u32,
    token: TokenIdx,
    children: Vec<FixTerm>,
    height: usize,
    length: usize,
    text: String,
}

#[derive(Clone)]
pub struct FixTerm(Arc<Node>);

impl FixTerm {
    /// Identifier unique within the owning system.
    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn token(&self) -> TokenIdx {
        self.0.token
    }

    /// The support `a`, in rank order.
    pub fn children(&self) -> &[FixTerm] {
        &self.0.children
    }

    /// `h(∘(a, σ)) = max({0} ∪ {h(t) + 1 : t ∈ a})`.
    pub fn height(&self) -> usize {
        self.0.height
    }

    /// `l(∘(a, σ)) = 1 + Σ_{t ∈ a} l(t)`.
    pub fn length(&self) -> usize {
        self.0.length
    }

    /// The printed form `(token: child child ...)`.
    pub fn text(&self) -> &str {
        &self.0.text
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// The structural rank: height, then length, then printed form.
    pub fn rank_cmp(&self, other: &FixTerm) -> Ordering {
        (self.height(), self.length(), self.text()).cmp(&(other.height(), other.length(), other.text()))
    }
}

impl PartialEq for FixTerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.text == other.0.text
    }
}

impl Eq for FixTerm {}

impl Hash for FixTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.text.hash(state)
    }
}

impl PartialOrd for FixTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_cmp(other)
    }
}

impl fmt::Display for FixTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

impl fmt::Debug for FixTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

/// Terms over one dilator, with their order memoized.
///
/// The dilator should be normal: otherwise two distinct terms can lie below
/// each other and comparisons panic.
pub struct TermSystem {
    d: Arc<CodedDilator>,
    nodes: DashMap<String, FixTerm>,
    next: AtomicU32,
    memo: DashMap<(u32, u32), bool>,
}

/// Output of [`TermSystem::enumerate_terms`].
#[derive(Clone, Debug)]
pub struct TermEnumeration {
    /// In rank order.
    pub terms: Vec<FixTerm>,
    /// Set when `max_count` cut the enumeration short.
    pub truncated: bool,
}

impl TermSystem {
    pub fn new(d: Arc<CodedDilator>) -> Self {
        TermSystem {
            d,
            nodes: DashMap::new(),
            next: AtomicU32::new(0),
            memo: DashMap::new(),
        }
    }

    pub fn dilator(&self) -> &Arc<CodedDilator> {
        &self.d
    }

    /// The order induced on a rank-sorted list of distinct terms.
    pub fn induced_order(&self, terms: &[FixTerm]) -> Result<FinPoset> {
        FinPoset::from_fn(terms.len(), |i, j| i == j || self.leq(&terms[i], &terms[j]))
    }

    /// `∘(a, σ)` for the set `a` of `children` and a token whose shape must
    /// be the order induced on `a`.
    pub fn mk_term(&self, children: Vec<FixTerm>, token: TokenIdx) -> Result<FixTerm> {
        if token as usize >= self.d.trace().len() {
            return Err(Error::Structural(format!("token index {token} out of range")));
        }
        let mut children = children;
        children.sort();
        children.dedup();
        let host = self.induced_order(&children)?;
        let (shape, _) = canonical_form(&host);
        let tok = self.d.token(token);
        if shape != tok.shape {
            return Err(Error::ShapeMismatch(format!(
                "children induce {shape}, token {:?} has shape {}",
                tok.id, tok.shape
            )));
        }
        Ok(self.intern(children, token))
    }

    /// As [`TermSystem::mk_term`] with the token given by its id.
    pub fn mk(&self, children: Vec<FixTerm>, token: &str) -> Result<FixTerm> {
        let t = self
            .d
            .token_index(token)
            .ok_or_else(|| Error::Parse(format!("unknown token {token:?}")))?;
        self.mk_term(children, t)
    }

    fn intern(&self, children: Vec<FixTerm>, token: TokenIdx) -> FixTerm {
        let mut text = format!("({}:", self.d.token_id(token));
        for (i, c) in children.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            text.push_str(c.text());
        }
        text.push(')');
        if let Some(hit) = self.nodes.get(&text) {
            return hit.clone();
        }
        let height = children.iter().map(|c| c.height() + 1).max().unwrap_or(0);
        let length = 1 + children.iter().map(FixTerm::length).sum::<usize>();
        self.nodes
            .entry(text.clone())
            .or_insert_with(|| {
                FixTerm(Arc::new(Node {
                    id: self.next.fetch_add(1, AtomicOrdering::Relaxed),
                    token,
                    children,
                    height,
                    length,
                    text,
                }))
            })
            .clone()
    }

    /// `κ`: the term for an element `x` of `W(X)`, where `X` is the order
    /// induced on `terms` (in the given order, which need not be ranked).
    pub fn kappa(&self, terms: &[FixTerm], x: &DilElem) -> Result<FixTerm> {
        let host = FinPoset::from_fn(terms.len(), |i, j| i == j || self.leq(&terms[i], &terms[j]))?;
        let mut a: Vec<FixTerm> = x.support().iter().map(|&p| terms[p].clone()).collect();
        a.sort();
        let target = self.induced_order(&a)?;
        let f: Vec<usize> = (0..terms.len())
            .map(|p| a.iter().position(|t| *t == terms[p]).unwrap_or(0))
            .collect();
        let moved = self.d.apply_values(&host, &target, &f, x)?;
        self.mk_term(a, moved.token())
    }

    /// The element of `W(a)` that `t = ∘(a, σ)` stands for, with `a` in rank order.
    pub fn as_elem(&self, t: &FixTerm) -> (FinPoset, DilElem) {
        let host = self
            .induced_order(t.children())
            .expect("children of a term form a partial order");
        let support: Vec<usize> = (0..t.children().len()).collect();
        (host, DilElem::raw(support, t.token()))
    }

    /// The order of the fixed point: `∘(a, σ) <= ∘(b, τ)` iff `σ <= τ` in
    /// `W(a ∪ b)` or `∘(a, σ) <= t` for some `t ∈ b`.
    pub fn leq(&self, s: &FixTerm, t: &FixTerm) -> bool {
        if s == t {
            return true;
        }
        let key = (s.id(), t.id());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let v = self.leq_uncached(s, t);
        self.memo.insert(key, v);
        v
    }

    fn leq_uncached(&self, s: &FixTerm, t: &FixTerm) -> bool {
        let mut u: Vec<FixTerm> = s.children().iter().chain(t.children()).cloned().collect();
        u.sort();
        u.dedup();
        let host = self
            .induced_order(&u)
            .expect("the term order of a normal dilator is a partial order");
        let pos = |c: &FixTerm| u.iter().position(|x| x == c).expect("child lies in the union");
        let x = DilElem::raw(s.children().iter().map(pos).collect(), s.token());
        let y = DilElem::raw(t.children().iter().map(pos).collect(), t.token());
        let first = self
            .d
            .leq(&host, &x, &y)
            .expect("union of two supports is within the table");
        first || t.children().iter().any(|c| self.leq(s, c))
    }

    /// `LT`, `GT`, `EQ` or `INC`.
    pub fn compare(&self, s: &FixTerm, t: &FixTerm) -> Comparison {
        Comparison::from_pair(self.leq(s, t), self.leq(t, s))
    }

    /// Every term of height at most `max_height`, level by level, stopping
    /// after `max_count` terms.
    pub fn enumerate_terms(&self, max_height: usize, max_count: usize) -> TermEnumeration {
        let n = self.d.n_max();
        let mut all: Vec<FixTerm> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for h in 0..=max_height {
            let mut prev = all.clone();
            prev.sort();
            let mut fresh = Vec::new();
            let mut subsets = Vec::new();
            subsets_upto(prev.len(), n, &mut subsets);
            let mut stop = false;
            for sub in &subsets {
                // a new term of height h has a child of height h - 1
                if h > 0 && !sub.iter().any(|&i| prev[i].height() + 1 == h) {
                    continue;
                }
                if h == 0 && !sub.is_empty() {
                    continue;
                }
                let children: Vec<FixTerm> = sub.iter().map(|&i| prev[i].clone()).collect();
                let host = self.induced_order(&children).expect("terms form a partial order");
                let shape = induced_sorted(&host, &(0..children.len()).collect::<Vec<_>>()).shape;
                for &tok in self.d.tokens_of_shape(&shape) {
                    if all.len() + fresh.len() >= max_count {
                        stop = true;
                        break;
                    }
                    let t = self.intern(children.clone(), tok);
                    if seen.insert(t.id()) {
                        fresh.push(t);
                    }
                }
                if stop {
                    break;
                }
            }
            let grew = !fresh.is_empty();
            all.extend(fresh);
            if stop {
                all.sort();
                return TermEnumeration {
                    terms: all,
                    truncated: true,
                };
            }
            if !grew {
                break;
            }
        }
        all.sort();
        TermEnumeration {
            terms: all,
            truncated: false,
        }
    }

    /// Parses `(token: child ...)`; children may come in any order.
    pub fn parse(&self, text: &str) -> Result<FixTerm> {
        let mut p = Parser {
            s: text.as_bytes(),
            i: 0,
        };
        let t = p.term(self)?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", p.i)));
        }
        Ok(t)
    }
}

fn subsets_upto(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == k {
            return;
        }
        for x in from..n {
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::new(), out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {:?} at byte {}", c as char, self.i)))
        }
    }

    fn term(&mut self, sys: &TermSystem) -> Result<FixTerm> {
        self.expect(b'(')?;
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i] != b':' {
            self.i += 1;
        }
        let id = std::str::from_utf8(&self.s[start..self.i])
            .map_err(|_| Error::Parse("token id is not UTF-8".into()))?
            .trim()
            .to_string();
        self.expect(b':')?;
        let mut children = Vec::new();
        loop {
            self.ws();
            match self.s.get(self.i) {
                Some(b')') => {
                    self.i += 1;
                    break;
                }
                Some(b'(') => children.push(self.term(sys)?),
                _ => return Err(Error::Parse(format!("expected a term or ')' at byte {}", self.i))),
            }
        }
        let n = children.len();
        children.sort();
        children.dedup();
        if children.len() != n {
            return Err(Error::Parse("a child is listed twice".into()));
        }
        sys.mk(children, &id)
    }
}

/// Outcome of comparing two elements both ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Gt,
    Eq,
    Inc,
}

impl Comparison {
    pub fn from_pair(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => Comparison::Eq,
            (true, false) => Comparison::Lt,
            (false, true) => Comparison::Gt,
            (false, false) => Comparison::Inc,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Lt => "LT",
            Comparison::Gt => "GT",
            Comparison::Eq => "EQ",
            Comparison::Inc => "INC",
        })
    }
}
