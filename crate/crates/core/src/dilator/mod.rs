//! Coded finite dilators.
//!
//! A dilator `W` is determined by its trace (canonical shapes `c` with the
//! full-support elements over them), the action of bijective
//! quasi-embeddings between shapes on those tokens, and a comparison table
//! for pairs of elements whose supports cover a canonical poset `d`.
//! Every other comparison is obtained by restricting to the union of the two
//! supports and transporting both tokens into normal form.
//!
//! An element of `W(X)` is a [`DilElem`]: a support `a ⊆ X` together with a
//! token of shape `|a|`, read through the fixed enumeration of `a`.

mod builtins;
pub mod direct;
mod fixtures;
mod json;
mod validate;

pub use builtins::{
    parse_builtin, prime_transform, product_dilator, seq_dilator, seq_dilator_with, unary_dilator, wz_dilator,
    HigmanFn, UnarySpec,
};
pub use direct::Decoded;
pub use fixtures::{
    all_empty_dilator, discrete_unary, flipped_seq3, mixed_variance_product, product_unary, reversed_unary,
};
pub use json::{export_json, load_json, resolve, to_file, ActionEntry, DilatorFile, TableEntry, TokenEntry};
pub use validate::{
    is_monotone, is_monotone_with, is_normal, is_normal_with, unary_wpo_decision, validate, validate_with, Bounds,
    ClauseReport, MonotoneReport, MonotoneWitness, NormalReport, ValidationReport,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::limits;
use crate::orders::canonical::induced_sorted;
use crate::orders::{CanonicalPoset, FinPoset, OrderMap, QeMap, ShapeId, SubsetEnum};

pub type TokenIdx = u32;

/// What a token stands for in the construction that produced it.
/// Point indices refer to the token's canonical shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TokenPayload {
    Opaque,
    Seq(Vec<usize>),
    Tuple(Vec<usize>),
    WzOne,
    WzPair(usize),
    UnaryEmpty(usize),
    UnaryPoint(usize),
    Star,
    Plus,
    Triple { x: usize, y: usize, inner: DilElem },
}

#[derive(Clone, Debug)]
pub struct TraceToken {
    pub id: String,
    pub shape: CanonicalPoset,
    pub payload: TokenPayload,
}

/// An element of `W(X)` in normal form. The host `X` is passed alongside.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DilElem {
    support: Vec<usize>,
    token: TokenIdx,
}

impl DilElem {
    pub(crate) fn raw(support: Vec<usize>, token: TokenIdx) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        DilElem { support, token }
    }

    /// Sorted support.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn token(&self) -> TokenIdx {
        self.token
    }
}

/// A table entry key: `d` is canonical, `s` and `t` are bit masks over `d`
/// with `s | t` covering `d`, and the tokens are read through the fixed
/// enumerations of `s` and `t` inside `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableKey {
    pub d: ShapeId,
    pub s: u32,
    pub sigma: TokenIdx,
    pub t: u32,
    pub tau: TokenIdx,
}

/// A table key with everything a derived table needs: `s[i]` is the point
/// of `d` enumerating point `i` of the shape of `sigma`.
pub struct KeyView<'a> {
    pub d: &'a CanonicalPoset,
    pub s: &'a [usize],
    pub sigma: &'a TraceToken,
    pub t: &'a [usize],
    pub tau: &'a TraceToken,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ActKey {
    token: TokenIdx,
    to: ShapeId,
    map: u64,
}

fn pack(map: &[usize]) -> u64 {
    debug_assert!(map.len() <= 16 && map.iter().all(|&v| v < 16));
    map.iter().fold(0u64, |acc, &v| acc << 4 | v as u64) | (map.len() as u64) << 60
}

pub type ActFn = dyn Fn(&TraceToken, &QeMap) -> Option<TokenPayload> + Send + Sync;
pub type TableFn = dyn Fn(&KeyView<'_>) -> bool + Send + Sync;

/// How a dilator was built; the direct semantics of built-ins hang off this.
#[derive(Clone, Debug)]
pub enum Origin {
    Seq(usize),
    Product(usize),
    Wz(FinPoset),
    Unary(UnarySpec),
    Prime(Arc<CodedDilator>),
    File,
    Fixture(&'static str),
}

pub struct CodedDilator {
    name: String,
    n_max: usize,
    trace: Vec<TraceToken>,
    by_id: HashMap<String, TokenIdx>,
    by_shape: HashMap<ShapeId, Vec<TokenIdx>>,
    by_payload: HashMap<(ShapeId, TokenPayload), TokenIdx>,
    action: HashMap<ActKey, TokenIdx>,
    action_fn: Option<Arc<ActFn>>,
    action_memo: DashMap<ActKey, Option<TokenIdx>>,
    table: HashMap<TableKey, bool>,
    table_fn: Option<Arc<TableFn>>,
    table_memo: DashMap<TableKey, bool>,
    origin: Origin,
}

impl fmt::Debug for CodedDilator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodedDilator({}, {} tokens)", self.name, self.trace.len())
    }
}

/// Assembles a dilator from tokens plus explicit and/or derived data.
/// Explicit entries take precedence over derived ones.
pub struct DilatorBuilder {
    name: String,
    n_max: usize,
    trace: Vec<TraceToken>,
    action: Vec<(String, QeMap, String)>,
    action_fn: Option<Arc<ActFn>>,
    table: Vec<(TableKeySpec, bool)>,
    table_fn: Option<Arc<TableFn>>,
    origin: Origin,
}

/// A table key with token ids and explicit subsets, before interning.
#[derive(Clone, Debug)]
pub struct TableKeySpec {
    pub d: CanonicalPoset,
    pub s: Vec<usize>,
    pub sigma: String,
    pub t: Vec<usize>,
    pub tau: String,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, ':' | '(' | ')' | '@' | ','))
}

impl DilatorBuilder {
    pub fn new(name: impl Into<String>, n_max: usize, origin: Origin) -> Self {
        DilatorBuilder {
            name: name.into(),
            n_max,
            trace: Vec::new(),
            action: Vec::new(),
            action_fn: None,
            table: Vec::new(),
            table_fn: None,
            origin,
        }
    }

    pub fn token(mut self, id: impl Into<String>, shape: CanonicalPoset, payload: TokenPayload) -> Self {
        self.trace.push(TraceToken {
            id: id.into(),
            shape,
            payload,
        });
        self
    }

    pub fn push_token(&mut self, id: impl Into<String>, shape: CanonicalPoset, payload: TokenPayload) {
        self.trace.push(TraceToken {
            id: id.into(),
            shape,
            payload,
        });
    }

    pub fn action_entry(&mut self, from: impl Into<String>, q: QeMap, to: impl Into<String>) {
        self.action.push((from.into(), q, to.into()));
    }

    pub fn derived_action(mut self, f: Arc<ActFn>) -> Self {
        self.action_fn = Some(f);
        self
    }

    pub fn table_entry(&mut self, key: TableKeySpec, value: bool) {
        self.table.push((key, value));
    }

    pub fn derived_table(mut self, f: Arc<TableFn>) -> Self {
        self.table_fn = Some(f);
        self
    }

    pub fn build(self) -> Result<CodedDilator> {
        let mut by_id = HashMap::new();
        let mut by_shape: HashMap<ShapeId, Vec<TokenIdx>> = HashMap::new();
        let mut by_payload = HashMap::new();
        for (i, tok) in self.trace.iter().enumerate() {
            let i = i as TokenIdx;
            if !valid_id(&tok.id) {
                return Err(Error::Structural(format!("invalid token id {:?}", tok.id)));
            }
            if by_id.insert(tok.id.clone(), i).is_some() {
                return Err(Error::Structural(format!("duplicate token id {:?}", tok.id)));
            }
            if tok.shape.size() > self.n_max {
                return Err(Error::Structural(format!(
                    "token {:?} has shape size {} above n_max {}",
                    tok.id,
                    tok.shape.size(),
                    self.n_max
                )));
            }
            by_shape.entry(tok.shape.id()).or_default().push(i);
            if tok.payload != TokenPayload::Opaque
                && by_payload.insert((tok.shape.id(), tok.payload.clone()), i).is_some()
            {
                return Err(Error::Structural(format!(
                    "two tokens share the payload of {:?}",
                    tok.id
                )));
            }
        }
        let mut d = CodedDilator {
            name: self.name,
            n_max: self.n_max,
            trace: self.trace,
            by_id,
            by_shape,
            by_payload,
            action: HashMap::new(),
            action_fn: self.action_fn,
            action_memo: DashMap::new(),
            table: HashMap::new(),
            table_fn: self.table_fn,
            table_memo: DashMap::new(),
            origin: self.origin,
        };
        for (from, q, to) in self.action {
            let f = d.require_id(&from)?;
            let t = d.require_id(&to)?;
            let (fs, ts) = (&d.trace[f as usize].shape, &d.trace[t as usize].shape);
            if q.to != *ts || q.map.len() != fs.size() {
                return Err(Error::ShapeMismatch(format!(
                    "action entry {from} -> {to} does not map {fs} onto {ts}"
                )));
            }
            if !is_bijective_qe(fs, &q) {
                return Err(Error::Structural(format!(
                    "action entry {from} -> {to} is not along a bijective quasi-embedding"
                )));
            }
            let key = ActKey {
                token: f,
                to: ts.id(),
                map: pack(&q.map),
            };
            if d.action.insert(key, t).is_some_and(|old| old != t) {
                return Err(Error::Structural(format!(
                    "conflicting action entries for {from} along {:?}",
                    q.map
                )));
            }
        }
        for (spec, value) in self.table {
            let key = d.intern_key(&spec)?;
            d.table.insert(key, value);
        }
        Ok(d)
    }
}

fn is_bijective_qe(from: &CanonicalPoset, q: &QeMap) -> bool {
    let k = from.size();
    let mut seen = vec![false; k];
    for &v in &q.map {
        if v >= k || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..k).all(|i| (0..k).all(|j| !q.to.le(q.map[i], q.map[j]) || from.le(i, j)))
}

fn mask_of(points: &[usize]) -> u32 {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

fn points_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

impl CodedDilator {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn trace(&self) -> &[TraceToken] {
        &self.trace
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn token(&self, i: TokenIdx) -> &TraceToken {
        &self.trace[i as usize]
    }

    pub fn token_id(&self, i: TokenIdx) -> &str {
        &self.trace[i as usize].id
    }

    pub fn token_index(&self, id: &str) -> Option<TokenIdx> {
        self.by_id.get(id).copied()
    }

    fn require_id(&self, id: &str) -> Result<TokenIdx> {
        self.token_index(id)
            .ok_or_else(|| Error::Structural(format!("unknown token id {id:?}")))
    }

    pub fn tokens_of_shape(&self, c: &CanonicalPoset) -> &[TokenIdx] {
        self.by_shape.get(&c.id()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn lookup_payload(&self, shape: &CanonicalPoset, payload: &TokenPayload) -> Option<TokenIdx> {
        self.by_payload.get(&(shape.id(), payload.clone())).copied()
    }

    /// A builder carrying this dilator's tokens and derived action and table,
    /// without its explicit entries.
    pub(crate) fn derive_builder(&self, name: impl Into<String>, origin: Origin) -> DilatorBuilder {
        DilatorBuilder {
            name: name.into(),
            n_max: self.n_max,
            trace: self.trace.clone(),
            action: Vec::new(),
            action_fn: self.action_fn.clone(),
            table: Vec::new(),
            table_fn: self.table_fn.clone(),
            origin,
        }
    }

    /// True iff every token has a shape with at most one point.
    pub fn is_unary(&self) -> bool {
        self.trace.iter().all(|t| t.shape.size() <= 1)
    }

    /// Largest shape size among the tokens.
    pub fn max_shape(&self) -> usize {
        self.trace.iter().map(|t| t.shape.size()).max().unwrap_or(0)
    }

    /// Transports `token` along the bijective quasi-embedding `q` out of its shape.
    pub fn act(&self, token: TokenIdx, q: &QeMap) -> Result<TokenIdx> {
        let tok = self.token(token);
        if q.to == tok.shape && q.map.iter().enumerate().all(|(i, &v)| i == v) {
            return Ok(token);
        }
        let key = ActKey {
            token,
            to: q.to.id(),
            map: pack(&q.map),
        };
        if let Some(&t) = self.action.get(&key) {
            return Ok(t);
        }
        let found = match &self.action_fn {
            None => None,
            Some(f) => match self.action_memo.get(&key) {
                Some(hit) => *hit,
                None => {
                    let t = f(tok, q).and_then(|p| self.lookup_payload(&q.to, &p));
                    self.action_memo.insert(key, t);
                    t
                }
            },
        };
        found.ok_or_else(|| {
            Error::Structural(format!(
                "no action entry for token {:?} along {:?} into {}",
                tok.id, q.map, q.to
            ))
        })
    }

    pub(crate) fn has_action(&self, token: TokenIdx, q: &QeMap) -> bool {
        self.act(token, q).is_ok()
    }

    pub(crate) fn intern_key(&self, spec: &TableKeySpec) -> Result<TableKey> {
        let d = &spec.d;
        let n = d.size();
        if n > 2 * self.n_max {
            return Err(Error::Structural(format!("table poset {d} exceeds twice n_max")));
        }
        let norm = |pts: &[usize]| -> Result<Vec<usize>> {
            let mut p = pts.to_vec();
            p.sort_unstable();
            p.dedup();
            if p.len() != pts.len() || p.last().is_some_and(|&x| x >= n) {
                return Err(Error::Structural(format!(
                    "table subset {pts:?} is not a subset of {d}"
                )));
            }
            Ok(p)
        };
        let (s, t) = (norm(&spec.s)?, norm(&spec.t)?);
        let (sm, tm) = (mask_of(&s), mask_of(&t));
        if (sm | tm) != (1u32 << n) - 1 {
            return Err(Error::Structural(format!(
                "table subsets {s:?} and {t:?} do not cover {d}"
            )));
        }
        let sigma = self.require_id(&spec.sigma)?;
        let tau = self.require_id(&spec.tau)?;
        for (pts, tok) in [(&s, sigma), (&t, tau)] {
            let shape = induced_sorted(d.poset(), pts).shape;
            if shape != self.token(tok).shape {
                return Err(Error::ShapeMismatch(format!(
                    "subset {pts:?} of {d} has shape {shape}, token {:?} has shape {}",
                    self.token(tok).id,
                    self.token(tok).shape
                )));
            }
        }
        Ok(TableKey {
            d: d.id(),
            s: sm,
            sigma,
            t: tm,
            tau,
        })
    }

    /// The table entry for `key`; omitted entries are false.
    pub fn table_value(&self, key: &TableKey) -> bool {
        if let Some(&v) = self.table.get(key) {
            return v;
        }
        let Some(f) = &self.table_fn else {
            return false;
        };
        if let Some(hit) = self.table_memo.get(key) {
            return *hit;
        }
        let d = CanonicalPoset::from_id(key.d);
        let s = induced_sorted(d.poset(), &points_of(key.s)).en;
        let t = induced_sorted(d.poset(), &points_of(key.t)).en;
        let view = KeyView {
            d: &d,
            s: &s,
            sigma: self.token(key.sigma),
            t: &t,
            tau: self.token(key.tau),
        };
        let v = f(&view);
        self.table_memo.insert(*key, v);
        v
    }

    /// A validated element of `W(host)`.
    pub fn elem(&self, host: &FinPoset, support: &[usize], token: TokenIdx) -> Result<DilElem> {
        if token as usize >= self.trace.len() {
            return Err(Error::Structural(format!("token index {token} out of range")));
        }
        let e = crate::orders::induced_suborder(host, support)?;
        if e.shape != self.token(token).shape {
            return Err(Error::ShapeMismatch(format!(
                "support has shape {}, token {:?} has shape {}",
                e.shape,
                self.token(token).id,
                self.token(token).shape
            )));
        }
        let mut support = support.to_vec();
        support.sort_unstable();
        Ok(DilElem { support, token })
    }

    /// The fixed enumeration of the support of `x` in `host`.
    pub fn enumeration(&self, host: &FinPoset, x: &DilElem) -> SubsetEnum {
        induced_sorted(host, &x.support)
    }

    /// Reads `x` inside the subposet enumerated by `e: c -> host`, returning
    /// the support mask in `c` and the transported token.
    fn normalize_into(&self, host: &FinPoset, c: &CanonicalPoset, e: &[usize], x: &DilElem) -> Result<(u32, TokenIdx)> {
        let en_a = induced_sorted(host, &x.support).en;
        let pos: Vec<usize> = en_a
            .iter()
            .map(|p| e.iter().position(|q| q == p).expect("support lies in the union"))
            .collect();
        let mut s = pos.clone();
        s.sort_unstable();
        let en_s = induced_sorted(c.poset(), &s);
        let shape = self.token(x.token).shape.clone();
        if en_s.shape != shape {
            return Err(Error::ShapeMismatch(format!(
                "support has shape {}, token {:?} has shape {}",
                en_s.shape,
                self.token(x.token).id,
                shape
            )));
        }
        let h: Vec<usize> = pos
            .iter()
            .map(|p| en_s.en.iter().position(|q| q == p).unwrap())
            .collect();
        let tok = self.act(x.token, &QeMap { to: shape, map: h })?;
        Ok((mask_of(&s), tok))
    }

    /// Normal form of the pair `(x, y)` inside the canonical poset on the
    /// union of their supports.
    pub fn restrict_to_union(&self, host: &FinPoset, x: &DilElem, y: &DilElem) -> Result<Restriction> {
        let mut u: Vec<usize> = x.support.iter().chain(&y.support).copied().collect();
        u.sort_unstable();
        u.dedup();
        if u.len() > 2 * self.n_max {
            return Err(Error::resource("union of supports", u.len(), 2 * self.n_max));
        }
        let en_u = induced_sorted(host, &u);
        let (s, sigma) = self.normalize_into(host, &en_u.shape, &en_u.en, x)?;
        let (t, tau) = self.normalize_into(host, &en_u.shape, &en_u.en, y)?;
        Ok(Restriction {
            c: en_u.shape,
            e: en_u.en,
            key: TableKey { d: 0, s, sigma, t, tau },
        })
    }

    /// The order of `W(host)`.
    pub fn leq(&self, host: &FinPoset, x: &DilElem, y: &DilElem) -> Result<bool> {
        if x == y {
            return Ok(true);
        }
        let r = self.restrict_to_union(host, x, y)?;
        let mut key = r.key;
        key.d = r.c.id();
        Ok(self.table_value(&key))
    }

    /// `W(f)(x)` for a quasi-embedding `f`.
    pub fn apply_map(&self, f: &OrderMap, x: &DilElem) -> Result<DilElem> {
        if !f.is_quasi_embedding() {
            return Err(Error::NotQuasiEmbedding);
        }
        self.apply_values(f.domain(), f.codomain(), f.values(), x)
    }

    /// `W(f)(x)` where `f` is given by its values; only its restriction to the
    /// support of `x` matters and must reflect the order.
    pub fn apply_values(&self, dom: &FinPoset, cod: &FinPoset, f: &[usize], x: &DilElem) -> Result<DilElem> {
        let en_a = induced_sorted(dom, &x.support).en;
        let img: Vec<usize> = en_a.iter().map(|&p| f[p]).collect();
        for i in 0..img.len() {
            for j in 0..img.len() {
                if (i != j && img[i] == img[j]) || (cod.le(img[i], img[j]) && !dom.le(en_a[i], en_a[j])) {
                    return Err(Error::NotQuasiEmbedding);
                }
            }
        }
        let mut b = img.clone();
        b.sort_unstable();
        let en_b = induced_sorted(cod, &b);
        let q: Vec<usize> = img
            .iter()
            .map(|p| en_b.en.iter().position(|r| r == p).unwrap())
            .collect();
        let token = self.act(x.token, &QeMap { to: en_b.shape, map: q })?;
        Ok(DilElem { support: b, token })
    }

    /// All elements of `W(host)`: supports by size then lexicographically,
    /// tokens in trace order.
    pub fn elements(&self, host: &FinPoset) -> Vec<DilElem> {
        let n = host.size();
        let mut out = Vec::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut cur = Vec::new();
        fn gen(n: usize, from: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for x in from..n {
                cur.push(x);
                gen(n, x + 1, k, cur, out);
                cur.pop();
            }
        }
        for k in 0..=self.max_shape().min(n) {
            gen(n, 0, k, &mut cur, &mut subsets);
        }
        for a in subsets {
            let shape = induced_sorted(host, &a).shape;
            for &t in self.tokens_of_shape(&shape) {
                out.push(DilElem {
                    support: a.clone(),
                    token: t,
                });
            }
        }
        out
    }

    /// `W(host)` with its order, for hosts within the enumeration bound.
    pub fn eval_order(&self, host: &FinPoset) -> Result<Evaluation> {
        let cap = limits::poset_cap();
        if host.size() > cap {
            return Err(Error::resource("dilator evaluation", host.size(), cap));
        }
        self.evaluate_unbounded(host)
    }

    pub(crate) fn evaluate_unbounded(&self, host: &FinPoset) -> Result<Evaluation> {
        let elems = self.elements(host);
        let n = elems.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(host, &elems[i], &elems[j])?;
            }
        }
        Ok(Evaluation {
            host: host.clone(),
            elems,
            leq,
        })
    }

    /// Prints `x` as `token@[support]`.
    pub fn show(&self, x: &DilElem) -> String {
        let pts: Vec<String> = x.support.iter().map(|p| p.to_string()).collect();
        format!("{}@[{}]", self.token_id(x.token), pts.join(","))
    }

    /// Parses the [`CodedDilator::show`] form.
    pub fn parse_elem(&self, host: &FinPoset, text: &str) -> Result<DilElem> {
        let bad = || Error::Parse(format!("bad element {text:?}, expected token@[points]"));
        let (id, rest) = text.trim().split_once('@').ok_or_else(bad)?;
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let pts = inner
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let tok = self
            .token_index(id)
            .ok_or_else(|| Error::Parse(format!("unknown token {id:?}")))?;
        self.elem(host, &pts, tok)
    }

    /// The reflecting map into `(Tr(W) + X)^{n+1}`, `n` the largest shape size:
    /// coordinate `i` is the `i`-th enumerated support point while there is
    /// one, then the token.
    pub fn prod_embed(&self, host: &FinPoset, x: &DilElem) -> Vec<ProdCoord> {
        let n = self.max_shape();
        let en = induced_sorted(host, &x.support).en;
        (0..=n)
            .map(|i| match en.get(i) {
                Some(&p) => ProdCoord::Point(p),
                None => ProdCoord::Trace(x.token),
            })
            .collect()
    }

    /// Calls `f` on every table key whose poset has at most `max_d` points,
    /// in a deterministic order.
    pub(crate) fn for_each_key(
        &self,
        max_d: usize,
        f: &mut dyn FnMut(&CanonicalPoset, &TableKey) -> Result<()>,
    ) -> Result<()> {
        let max_d = max_d.min(2 * self.n_max);
        for k in 0..=max_d {
            for d in crate::orders::all_canonical(k).iter() {
                let full: u32 = (1u32 << k) - 1;
                for s in 0..=full {
                    if s.count_ones() as usize > self.n_max {
                        continue;
                    }
                    let s_shape = induced_sorted(d.poset(), &points_of(s)).shape;
                    let sigmas = self.tokens_of_shape(&s_shape);
                    if sigmas.is_empty() {
                        continue;
                    }
                    let rest = full & !s;
                    // t ranges over rest ∪ (any subset of s)
                    let mut sub = s;
                    loop {
                        let t = rest | sub;
                        if t.count_ones() as usize <= self.n_max {
                            let t_shape = induced_sorted(d.poset(), &points_of(t)).shape;
                            for &sigma in sigmas {
                                for &tau in self.tokens_of_shape(&t_shape) {
                                    f(
                                        d,
                                        &TableKey {
                                            d: d.id(),
                                            s,
                                            sigma,
                                            t,
                                            tau,
                                        },
                                    )?;
                                }
                            }
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & s;
                    }
                }
            }
        }
        Ok(())
    }

    /// Writes a table key as its constituent parts.
    pub(crate) fn key_spec(&self, key: &TableKey) -> TableKeySpec {
        TableKeySpec {
            d: CanonicalPoset::from_id(key.d),
            s: points_of(key.s),
            sigma: self.token_id(key.sigma).to_string(),
            t: points_of(key.t),
            tau: self.token_id(key.tau).to_string(),
        }
    }

    pub(crate) fn show_key(&self, key: &TableKey) -> String {
        let k = self.key_spec(key);
        format!("(d={}, s={:?}, {}, t={:?}, {})", k.d, k.s, k.sigma, k.t, k.tau)
    }
}

/// Result of [`CodedDilator::restrict_to_union`]: `e: c -> host` enumerates
/// the union and `key` (with `d` left unset) holds the transported pair.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub c: CanonicalPoset,
    pub e: Vec<usize>,
    pub key: TableKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProdCoord {
    Trace(TokenIdx),
    Point(usize),
}

/// The componentwise order on `(Tr(W) + X)^{n+1}` with `Tr(W)` discrete.
pub fn prod_leq(host: &FinPoset, a: &[ProdCoord], b: &[ProdCoord]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (ProdCoord::Trace(s), ProdCoord::Trace(t)) => s == t,
            (ProdCoord::Point(p), ProdCoord::Point(q)) => host.le(*p, *q),
            _ => false,
        })
}

/// `W(X)` as a finite relation. For a valid dilator `leq` is a partial order.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub host: FinPoset,
    pub elems: Vec<DilElem>,
    pub leq: Vec<bool>,
}

impl Evaluation {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elems.len() + j]
    }

    pub fn index_of(&self, x: &DilElem) -> Option<usize> {
        self.elems.iter().position(|e| e == x)
    }

    pub fn poset(&self) -> Result<FinPoset> {
        FinPoset::from_matrix(self.elems.len(), self.leq.clone())
    }
}

#[cfg(test)]
mod tests;
