//! Built-in dilators: finite sequences under the Higman order, `n`-tuples,
//! `1 + Z × X`, unary dilators from order data, and the `{⋆, +}` transform.

use std::sync::Arc;

use super::{CodedDilator, DilatorBuilder, KeyView, Origin, TokenPayload, TraceToken};
use crate::error::{Error, Result};
use crate::limits;
use crate::orders::{all_canonical, higman_leq, CanonicalPoset, FinPoset, QeMap};

/// Signature of a Higman comparison, injectable for mutation testing.
pub type HigmanFn = fn(&FinPoset, &[usize], &[usize]) -> bool;

fn entries_id(shape: &CanonicalPoset, entries: &[usize]) -> String {
    let digits: String = entries
        .iter()
        .map(|&e| char::from_digit(e as u32, 36).expect("shape below 36 points"))
        .collect();
    format!("{}.{}", shape.code(), digits)
}

/// Every word of length `len` over `0..k` that uses each letter, in lexicographic order.
fn surjective_words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(k: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            if (0..k).all(|x| cur.contains(&x)) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..k {
            cur.push(x);
            go(k, len, cur, out);
            cur.pop();
        }
    }
    go(k, len, &mut cur, &mut out);
    out
}

fn rename_action() -> Arc<super::ActFn> {
    Arc::new(|tok: &TraceToken, q: &QeMap| match &tok.payload {
        TokenPayload::Seq(e) => Some(TokenPayload::Seq(e.iter().map(|&x| q.map[x]).collect())),
        TokenPayload::Tuple(e) => Some(TokenPayload::Tuple(e.iter().map(|&x| q.map[x]).collect())),
        other => Some(other.clone()),
    })
}

fn mapped(payload: &TokenPayload, en: &[usize]) -> Vec<usize> {
    match payload {
        TokenPayload::Seq(e) | TokenPayload::Tuple(e) => e.iter().map(|&x| en[x]).collect(),
        _ => Vec::new(),
    }
}

/// `W(X) = { <x_0, ..., x_{k-1}> : k < n }` ordered by Higman's lemma.
pub fn seq_dilator(n: usize) -> Result<CodedDilator> {
    seq_dilator_with(n, higman_leq)
}

/// [`seq_dilator`] with the sequence comparison supplied by the caller.
pub fn seq_dilator_with(n: usize, cmp: HigmanFn) -> Result<CodedDilator> {
    if n == 0 {
        return Err(Error::Precondition("seq needs n >= 1".into()));
    }
    let n_max = n - 1;
    let mut b = DilatorBuilder::new(format!("seq:{n}"), n_max, Origin::Seq(n));
    for k in 0..=n_max {
        for c in all_canonical(k).iter() {
            for len in k..n {
                for w in surjective_words(k, len) {
                    let id = if w.is_empty() {
                        "empty".to_string()
                    } else {
                        entries_id(c, &w)
                    };
                    b.push_token(id, c.clone(), TokenPayload::Seq(w));
                }
            }
        }
    }
    let table = move |v: &KeyView<'_>| {
        cmp(
            v.d.poset(),
            &mapped(&v.sigma.payload, v.s),
            &mapped(&v.tau.payload, v.t),
        )
    };
    b.derived_action(rename_action()).derived_table(Arc::new(table)).build()
}

/// `W(X) = X^n` with the componentwise order.
pub fn product_dilator(n: usize) -> Result<CodedDilator> {
    if n == 0 {
        return Err(Error::Precondition("prod needs n >= 1".into()));
    }
    let mut b = DilatorBuilder::new(format!("prod:{n}"), n, Origin::Product(n));
    for k in 1..=n {
        for c in all_canonical(k).iter() {
            for w in surjective_words(k, n) {
                b.push_token(entries_id(c, &w), c.clone(), TokenPayload::Tuple(w));
            }
        }
    }
    let table = |v: &KeyView<'_>| {
        let (x, y) = (mapped(&v.sigma.payload, v.s), mapped(&v.tau.payload, v.t));
        x.iter().zip(&y).all(|(&a, &b)| v.d.le(a, b))
    };
    b.derived_action(rename_action()).derived_table(Arc::new(table)).build()
}

/// `W_Z(X) = 1 + Z × X`, with `(z, x) <= (z', x')` iff both components compare.
pub fn wz_dilator(z: &FinPoset) -> Result<CodedDilator> {
    let mut b = DilatorBuilder::new(format!("wz:{}", z.to_json()), 1, Origin::Wz(z.clone()));
    b.push_token("one", CanonicalPoset::empty(), TokenPayload::WzOne);
    for i in 0..z.size() {
        b.push_token(format!("z{i}"), CanonicalPoset::chain(1), TokenPayload::WzPair(i));
    }
    let zz = z.clone();
    let table = move |v: &KeyView<'_>| match (&v.sigma.payload, &v.tau.payload) {
        (TokenPayload::WzOne, TokenPayload::WzOne) => true,
        (TokenPayload::WzPair(a), TokenPayload::WzPair(c)) => zz.le(*a, *c) && v.d.le(v.s[0], v.t[0]),
        _ => false,
    };
    b.derived_action(rename_action()).derived_table(Arc::new(table)).build()
}

/// Order data of a unary dilator. `W(X)` consists of the `empties` and of
/// pairs `(u, x)` for `u` in `points` and `x` in `X`. Pairs list strict
/// relations between indices; everything unlisted is incomparable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnarySpec {
    pub empties: Vec<String>,
    pub points: Vec<String>,
    /// `e_i <= e_j`.
    pub empty_le: Vec<(usize, usize)>,
    /// `e_i <= (u_j, x)` for every `x`.
    pub empty_below_point: Vec<(usize, usize)>,
    /// `(u_i, x) <= (u_j, x)` for `i != j`.
    pub same_point: Vec<(usize, usize)>,
    /// `(u_i, x) <= (u_j, y)` whenever `x < y`.
    pub lower_to_upper: Vec<(usize, usize)>,
    /// `(u_i, y) <= (u_j, x)` whenever `x < y`.
    pub upper_to_lower: Vec<(usize, usize)>,
}

pub fn unary_dilator(name: impl Into<String>, spec: UnarySpec) -> Result<CodedDilator> {
    let n_max = usize::from(!spec.points.is_empty());
    let mut b = DilatorBuilder::new(name, n_max, Origin::Unary(spec.clone()));
    for (i, e) in spec.empties.iter().enumerate() {
        b.push_token(e.clone(), CanonicalPoset::empty(), TokenPayload::UnaryEmpty(i));
    }
    for (i, u) in spec.points.iter().enumerate() {
        b.push_token(u.clone(), CanonicalPoset::chain(1), TokenPayload::UnaryPoint(i));
    }
    let table = move |v: &KeyView<'_>| {
        use TokenPayload::{UnaryEmpty as E, UnaryPoint as P};
        let has = |rel: &[(usize, usize)], i: usize, j: usize| rel.contains(&(i, j));
        match (&v.sigma.payload, &v.tau.payload) {
            (E(i), E(j)) => i == j || has(&spec.empty_le, *i, *j),
            (E(i), P(j)) => has(&spec.empty_below_point, *i, *j),
            (P(_), E(_)) => false,
            (P(i), P(j)) => {
                let (x, y) = (v.s[0], v.t[0]);
                if x == y {
                    i == j || has(&spec.same_point, *i, *j)
                } else if v.d.poset().lt(x, y) {
                    has(&spec.lower_to_upper, *i, *j)
                } else if v.d.poset().lt(y, x) {
                    has(&spec.upper_to_lower, *i, *j)
                } else {
                    false
                }
            }
            _ => false,
        }
    };
    b.derived_action(rename_action()).derived_table(Arc::new(table)).build()
}

/// `W'(X) = {⋆, +} ∪ { <x, y, σ> : x ≠ y, σ ∈ W(X) }`, ordered componentwise
/// with `⋆` and `+` isolated. The support of `<x, y, σ>` is `{x, y} ∪ supp(σ)`.
pub fn prime_transform(w: Arc<CodedDilator>) -> Result<CodedDilator> {
    let n_max = w.n_max() + 2;
    let cap = limits::poset_cap();
    if n_max > cap {
        return Err(Error::resource("transformed shape size", n_max, cap));
    }
    let mut b = DilatorBuilder::new(format!("prime:{}", w.name()), n_max, Origin::Prime(w.clone()));
    b.push_token("star", CanonicalPoset::empty(), TokenPayload::Star);
    b.push_token("plus", CanonicalPoset::empty(), TokenPayload::Plus);
    for k in 2..=n_max {
        let full: u32 = (1 << k) - 1;
        for c in all_canonical(k).iter() {
            let inner = w.elements(c.poset());
            for x in 0..k {
                for y in 0..k {
                    if x == y {
                        continue;
                    }
                    for e in &inner {
                        let r = e.support().iter().fold(0u32, |m, &p| m | 1 << p);
                        if (r | 1 << x | 1 << y) != full {
                            continue;
                        }
                        let id = format!("{}.{}{}.{:x}.{}", c.code(), x, y, r, w.token_id(e.token()));
                        b.push_token(id, c.clone(), TokenPayload::Triple { x, y, inner: e.clone() });
                    }
                }
            }
        }
    }
    let wa = w.clone();
    let action = move |tok: &TraceToken, q: &QeMap| match &tok.payload {
        TokenPayload::Triple { x, y, inner } => {
            let moved = wa.apply_values(tok.shape.poset(), q.to.poset(), &q.map, inner).ok()?;
            Some(TokenPayload::Triple {
                x: q.map[*x],
                y: q.map[*y],
                inner: moved,
            })
        }
        other => Some(other.clone()),
    };
    let wt = w;
    let table = move |v: &KeyView<'_>| match (&v.sigma.payload, &v.tau.payload) {
        (TokenPayload::Star, TokenPayload::Star) | (TokenPayload::Plus, TokenPayload::Plus) => true,
        (
            TokenPayload::Triple { x, y, inner },
            TokenPayload::Triple {
                x: x2,
                y: y2,
                inner: inner2,
            },
        ) => {
            let d = v.d.poset();
            if !d.le(v.s[*x], v.t[*x2]) || !d.le(v.s[*y], v.t[*y2]) {
                return false;
            }
            let a = wt.apply_values(v.sigma.shape.poset(), d, v.s, inner);
            let b = wt.apply_values(v.tau.shape.poset(), d, v.t, inner2);
            match (a, b) {
                (Ok(a), Ok(b)) => wt.leq(d, &a, &b).unwrap_or(false),
                _ => false,
            }
        }
        _ => false,
    };
    b.derived_action(Arc::new(action))
        .derived_table(Arc::new(table))
        .build()
}

/// Resolves `seq:<n>`, `prod:<n>`, `wz:<k>` over a `k`-antichain,
/// `wz:<poset json or file>`, `prime:<name>` and `fixture:<name>`.
pub fn parse_builtin(name: &str) -> Result<Arc<CodedDilator>> {
    let bad = || Error::Parse(format!("unknown dilator {name:?}"));
    let (kind, arg) = name.split_once(':').ok_or_else(bad)?;
    let num = || arg.parse::<usize>().map_err(|_| bad());
    let d = match kind {
        "seq" => seq_dilator(num()?)?,
        "prod" => product_dilator(num()?)?,
        "wz" => {
            if let Ok(k) = arg.parse::<usize>() {
                return Ok(Arc::new(wz_dilator(&FinPoset::antichain(k))?));
            }
            let text = if arg.trim_start().starts_with('{') {
                arg.to_string()
            } else {
                std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg:?}: {e}")))?
            };
            wz_dilator(&FinPoset::from_json(&text)?)?
        }
        "prime" => prime_transform(super::json::resolve(arg)?)?,
        "fixture" => super::fixtures::by_name(arg).ok_or_else(bad)??,
        _ => return Err(bad()),
    };
    Ok(Arc::new(d))
}
