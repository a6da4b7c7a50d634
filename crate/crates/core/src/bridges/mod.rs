//! Order-reflecting maps between trees, fixed-point terms and sequences.

use std::collections::HashMap;
use std::sync::Arc;

use crate::dilator::{prime_transform, CodedDilator, DilElem, Origin, TokenPayload};
use crate::error::{Error, Result};
use crate::fixpoint::{FixTerm, TermSystem};
use crate::orders::canonical::induced_sorted;
use crate::orders::{higman_leq, sum_order, FinPoset};
use crate::trees::{label_gadget, LabeledTree, TreeUniverse};

/// The term `κ(W(en)(σ))` for a word over distinct-or-repeated terms of a
/// sequence or tuple dilator.
fn word_term(sys: &TermSystem, word: &[FixTerm]) -> Result<FixTerm> {
    let mut elems: Vec<FixTerm> = word.to_vec();
    elems.sort();
    elems.dedup();
    let host = sys.induced_order(&elems)?;
    let all: Vec<usize> = (0..elems.len()).collect();
    let se = induced_sorted(&host, &all);
    let mut inv = vec![0; elems.len()];
    for (i, &h) in se.en.iter().enumerate() {
        inv[h] = i;
    }
    let letters: Vec<usize> = word
        .iter()
        .map(|t| inv[elems.iter().position(|e| e == t).expect("letter is listed")])
        .collect();
    let d = sys.dilator();
    let payload = match d.origin() {
        Origin::Product(_) => TokenPayload::Tuple(letters),
        _ => TokenPayload::Seq(letters),
    };
    let token = d
        .lookup_payload(&se.shape, &payload)
        .ok_or_else(|| Error::Precondition(format!("{} has no token for a word of length {}", d.name(), word.len())))?;
    sys.mk_term(elems, token)
}

/// `f(0*(t_0 ... t_{k-1})) = κ(<f(t_0), ..., f(t_{k-1})>)` into the fixed
/// point of `seq:n`.
pub fn tree_to_fixpoint(sys: &TermSystem, t: &LabeledTree) -> Result<FixTerm> {
    let Origin::Seq(n) = sys.dilator().origin() else {
        return Err(Error::Precondition("tree_to_fixpoint needs a seq dilator".into()));
    };
    TreeUniverse::new(1, Some(*n)).check(t)?;
    let mut memo = HashMap::new();
    to_fix(sys, t, &mut memo)
}

fn to_fix(sys: &TermSystem, t: &LabeledTree, memo: &mut HashMap<LabeledTree, FixTerm>) -> Result<FixTerm> {
    if let Some(v) = memo.get(t) {
        return Ok(v.clone());
    }
    let word = t
        .children()
        .iter()
        .map(|c| to_fix(sys, c, memo))
        .collect::<Result<Vec<_>>>()?;
    let v = word_term(sys, &word)?;
    memo.insert(t.clone(), v.clone());
    Ok(v)
}

/// `g(l*(t_0 ... t_{k-1})) = 0*(t'_0 ... t'_{n-1})` with `t'_i = g(t_i)` for
/// `i < k` and the label gadget `t(l)` elsewhere.
pub fn delabel(m: usize, n: usize, t: &LabeledTree) -> Result<LabeledTree> {
    if m >= n {
        return Err(Error::Precondition(format!("m < n required, got m = {m}, n = {n}")));
    }
    TreeUniverse::new(m, Some(n)).check(t)?;
    let gadgets = (0..m).map(|l| label_gadget(m, l)).collect::<Result<Vec<_>>>()?;
    Ok(delabel_rec(n, &gadgets, t))
}

fn delabel_rec(n: usize, gadgets: &[LabeledTree], t: &LabeledTree) -> LabeledTree {
    let mut kids: Vec<LabeledTree> = t.children().iter().map(|c| delabel_rec(n, gadgets, c)).collect();
    kids.resize(n, gadgets[t.label()].clone());
    LabeledTree::new(0, kids)
}

/// `j(∘(a, σ)) = e(σ) * (j(en_a(0)) ... j(en_a(|a| - 1)))`; `e` maps trace
/// indices to labels and defaults to the identity. The image lies in the
/// trees with labels below `max(e) + 1` and branching below `n_max + 1`.
pub fn fixpoint_to_tree(sys: &TermSystem, e: Option<&[usize]>, t: &FixTerm) -> Result<LabeledTree> {
    let d = sys.dilator();
    let ident: Vec<usize> = (0..d.trace().len()).collect();
    let e = e.unwrap_or(&ident);
    if e.len() != d.trace().len() {
        return Err(Error::Precondition(format!(
            "label map has {} entries, the trace has {}",
            e.len(),
            d.trace().len()
        )));
    }
    let mut seen = e.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("label map is not injective".into()));
    }
    Ok(to_tree(sys, e, t))
}

fn to_tree(sys: &TermSystem, e: &[usize], t: &FixTerm) -> LabeledTree {
    let (host, x) = sys.as_elem(t);
    let en = induced_sorted(&host, x.support()).en;
    let kids = en.iter().map(|&i| to_tree(sys, e, &t.children()[i])).collect();
    LabeledTree::new(e[t.token() as usize], kids)
}

/// `Y = W(0) + W(1)` with incomparable summands, and a labeling of its
/// points by `tag:element`.
#[derive(Clone, Debug)]
pub struct UnaryAlphabet {
    pub y: FinPoset,
    pub empty: Vec<DilElem>,
    pub point: Vec<DilElem>,
}

impl UnaryAlphabet {
    pub fn new(d: &CodedDilator) -> Result<Self> {
        if !d.is_unary() {
            return Err(Error::Precondition(format!("{} is not unary", d.name())));
        }
        let e0 = d.eval_order(&FinPoset::empty())?;
        let e1 = d.eval_order(&FinPoset::chain(1))?;
        let y = sum_order(&[e0.poset()?, e1.poset()?], &[false, false]);
        Ok(UnaryAlphabet {
            y,
            empty: e0.elems,
            point: e1.elems,
        })
    }

    pub fn show(&self, d: &CodedDilator, i: usize) -> String {
        if i < self.empty.len() {
            format!("0:{}", d.show(&self.empty[i]))
        } else {
            format!("1:{}", d.show(&self.point[i - self.empty.len()]))
        }
    }
}

/// `j(∘(∅, σ)) = <(0, σ)>` and `j(∘({t}, σ)) = <(1, σ)> ⌢ j(t)`, as indices
/// into the points of `alphabet.y`.
pub fn unary_to_seq(sys: &TermSystem, alphabet: &UnaryAlphabet, t: &FixTerm) -> Result<Vec<usize>> {
    if !sys.dilator().is_unary() {
        return Err(Error::Precondition(format!("{} is not unary", sys.dilator().name())));
    }
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        match cur.children() {
            [] => {
                let x = DilElem::raw(Vec::new(), cur.token());
                let i = alphabet
                    .empty
                    .iter()
                    .position(|e| *e == x)
                    .expect("leaf token lies in W(0)");
                out.push(i);
                return Ok(out);
            }
            [c] => {
                let x = DilElem::raw(vec![0], cur.token());
                let i = alphabet
                    .point
                    .iter()
                    .position(|e| *e == x)
                    .expect("unary token lies in W(1)");
                out.push(alphabet.empty.len() + i);
                cur = c.clone();
            }
            _ => unreachable!("unary terms have at most one child"),
        }
    }
}

/// The fixed point of `W'` together with its two constant terms.
pub struct PrimeTarget {
    pub sys: TermSystem,
    pub star: FixTerm,
    pub plus: FixTerm,
}

impl PrimeTarget {
    pub fn new(d: Arc<CodedDilator>) -> Result<Self> {
        let sys = TermSystem::new(Arc::new(prime_transform(d)?));
        let star = sys.mk(Vec::new(), "star")?;
        let plus = sys.mk(Vec::new(), "plus")?;
        Ok(PrimeTarget { sys, star, plus })
    }
}

/// Image of [`to_prime`], recording whether the fallback branch fired
/// anywhere in the recursion.
#[derive(Clone, Debug)]
pub struct PrimeImage {
    pub term: FixTerm,
    pub default_taken: bool,
}

/// `j(∘(a, σ)) = κ'(<⋆̄, +̄, W(j ∘ en_a)(σ)>)`, falling back to `⋆̄` when
/// `j ∘ en_a` fails to reflect the order.
pub fn to_prime(src: &TermSystem, target: &PrimeTarget, t: &FixTerm) -> Result<PrimeImage> {
    let Origin::Prime(w) = target.sys.dilator().origin() else {
        return Err(Error::Precondition("target is not a transformed dilator".into()));
    };
    if !Arc::ptr_eq(w, src.dilator()) && w.name() != src.dilator().name() {
        return Err(Error::Mismatch(format!(
            "target transforms {}, source is {}",
            w.name(),
            src.dilator().name()
        )));
    }
    let mut memo = HashMap::new();
    let mut default_taken = false;
    let term = prime_rec(src, target, t, &mut memo, &mut default_taken)?;
    Ok(PrimeImage { term, default_taken })
}

fn prime_rec(
    src: &TermSystem,
    target: &PrimeTarget,
    t: &FixTerm,
    memo: &mut HashMap<u32, FixTerm>,
    default_taken: &mut bool,
) -> Result<FixTerm> {
    if let Some(v) = memo.get(&t.id()) {
        return Ok(v.clone());
    }
    let tsys = &target.sys;
    let wp = tsys.dilator();
    let Origin::Prime(w) = wp.origin() else { unreachable!() };
    let mut list = vec![target.star.clone(), target.plus.clone()];
    for c in t.children() {
        list.push(prime_rec(src, target, c, memo, default_taken)?);
    }
    let k = t.children().len();
    let (dom, x) = src.as_elem(t);
    let f: Vec<usize> = (0..k).map(|i| i + 2).collect();
    let reflects = (0..k).all(|i| (0..k).all(|j| i == j || !tsys.leq(&list[f[i]], &list[f[j]]) || dom.lt(i, j)));
    let v = if !reflects {
        *default_taken = true;
        target.star.clone()
    } else {
        let host = tsys.induced_order(&list)?;
        let inner = w.apply_values(&dom, &host, &f, &x)?;
        let all: Vec<usize> = (0..list.len()).collect();
        let se = induced_sorted(&host, &all);
        let mut inv = vec![0; list.len()];
        for (i, &h) in se.en.iter().enumerate() {
            inv[h] = i;
        }
        let inner = w.apply_values(&host, se.shape.poset(), &inv, &inner)?;
        let payload = TokenPayload::Triple {
            x: inv[0],
            y: inv[1],
            inner,
        };
        let token = wp
            .lookup_payload(&se.shape, &payload)
            .ok_or_else(|| Error::Structural("no transformed token for the image".into()))?;
        tsys.kappa(&list, &wp.elem(&host, &all, token)?)?
    };
    memo.insert(t.id(), v.clone());
    Ok(v)
}

/// `∘(∅, one) ↦ <>` and `∘({t}, z_i) ↦ <i> ⌢ word(t)` for the fixed point
/// of `W_Z(X) = 1 + Z × X`.
pub fn wz_term_to_word(sys: &TermSystem, t: &FixTerm) -> Result<Vec<usize>> {
    let d = sys.dilator();
    if !matches!(d.origin(), Origin::Wz(_)) {
        return Err(Error::Precondition(format!("{} is not a wz dilator", d.name())));
    }
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        match &d.token(cur.token()).payload {
            TokenPayload::WzOne => return Ok(out),
            TokenPayload::WzPair(z) => {
                out.push(*z);
                let next = cur.children()[0].clone();
                cur = next;
            }
            _ => unreachable!("wz tokens are one or pairs"),
        }
    }
}

/// Inverse of [`wz_term_to_word`].
pub fn wz_word_to_term(sys: &TermSystem, word: &[usize]) -> Result<FixTerm> {
    let d = sys.dilator();
    let Origin::Wz(z) = d.origin() else {
        return Err(Error::Precondition(format!("{} is not a wz dilator", d.name())));
    };
    let mut t = sys.mk(Vec::new(), "one")?;
    for &i in word.iter().rev() {
        if i >= z.size() {
            return Err(Error::OutOfRange {
                index: i,
                size: z.size(),
            });
        }
        t = sys.mk(vec![t], &format!("z{i}"))?;
    }
    Ok(t)
}

/// Every word over `0..k` of length at most `max_len`, shortest first.
pub fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut last = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &last {
            for i in 0..k {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        last = next;
    }
    out
}

/// The bijection between terms of height at most `h` and words of length
/// at most `h`, as pairs in term order.
pub fn wz_iso(sys: &TermSystem, h: usize) -> Result<Vec<(FixTerm, Vec<usize>)>> {
    let terms = sys.enumerate_terms(h, usize::MAX).terms;
    terms
        .into_iter()
        .map(|t| {
            let w = wz_term_to_word(sys, &t)?;
            Ok((t, w))
        })
        .collect()
}

/// Higman order on words over the parameter of a wz dilator.
pub fn wz_word_leq(sys: &TermSystem, s: &[usize], t: &[usize]) -> bool {
    match sys.dilator().origin() {
        Origin::Wz(z) => higman_leq(z, s, t),
        _ => false,
    }
}

/// Reflection and preservation counts of a map on a finite domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapCheck {
    pub pairs: usize,
    /// `(i, j)` with images comparable and arguments not.
    pub reflection_failures: Vec<(usize, usize)>,
    /// Pairs with `x <= y` whose images are also related.
    pub preserved: usize,
    pub related: usize,
    pub injective: bool,
}

impl MapCheck {
    pub fn reflects(&self) -> bool {
        self.reflection_failures.is_empty()
    }

    pub fn preserves(&self) -> bool {
        self.preserved == self.related
    }
}

/// Compares `le_in(i, j)` with `le_out(i, j)` on all ordered pairs of
/// `0..n`; `same(i, j)` decides equality of images.
pub fn check_map(
    n: usize,
    mut le_in: impl FnMut(usize, usize) -> bool,
    mut le_out: impl FnMut(usize, usize) -> bool,
    mut same: impl FnMut(usize, usize) -> bool,
) -> MapCheck {
    let mut r = MapCheck {
        pairs: n * n,
        injective: true,
        ..MapCheck::default()
    };
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (le_in(i, j), le_out(i, j));
            if b && !a {
                r.reflection_failures.push((i, j));
            }
            if a {
                r.related += 1;
                r.preserved += usize::from(b);
            }
            if i < j && same(i, j) {
                r.injective = false;
            }
        }
    }
    r
}
