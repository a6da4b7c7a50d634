//! Bounded searches for bad sequences and the constructions that turn a
//! failure of normality or monotonicity into one.
//!
//! Nothing here can certify a well partial order: a search that finds no
//! bad sequence says so only for the finite region it covered.

use crate::dilator::{CodedDilator, DilElem, MonotoneWitness, TokenIdx};
use crate::error::{Error, Result};
use crate::orders::{ord_cmp, sum_order, FinPoset, OrdTerm};

/// Limits of [`bad_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Length of the bad sequence sought.
    pub length: usize,
    /// Only the first `width` elements of the presentation are used.
    pub width: usize,
    /// Search nodes visited before giving up.
    pub budget: usize,
}

impl SearchBounds {
    pub fn new(length: usize, width: usize) -> Self {
        SearchBounds {
            length,
            width,
            budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadSearch {
    /// The least bad sequence in lexicographic order of indices.
    Found(Vec<usize>),
    /// The covered region holds no bad sequence of the requested length.
    NoneFound,
    /// The budget ran out first.
    Inconclusive { visited: usize },
}

/// Searches elements `0..n` ordered by `le` for `p_0, ..., p_{L-1}` with
/// `p_i ≰ p_j` for all `i < j`.
pub fn bad_search_by(n: usize, le: impl Fn(usize, usize) -> bool, bounds: SearchBounds) -> BadSearch {
    let n = n.min(bounds.width);
    // entries of a bad sequence are distinct, so none is longer than the order
    if bounds.length > n {
        return BadSearch::NoneFound;
    }
    let mut visited = 0;
    let mut cur = Vec::with_capacity(bounds.length);
    match extend(n, &le, bounds, &mut cur, &mut visited) {
        Some(true) => {
            debug_assert!(is_bad(&cur, &le));
            BadSearch::Found(cur)
        }
        Some(false) => BadSearch::NoneFound,
        None => BadSearch::Inconclusive { visited },
    }
}

fn extend(
    n: usize,
    le: &impl Fn(usize, usize) -> bool,
    bounds: SearchBounds,
    cur: &mut Vec<usize>,
    visited: &mut usize,
) -> Option<bool> {
    if cur.len() == bounds.length {
        return Some(true);
    }
    for x in 0..n {
        *visited += 1;
        if *visited > bounds.budget {
            return None;
        }
        if cur.iter().all(|&p| !le(p, x)) {
            cur.push(x);
            match extend(n, le, bounds, cur, visited) {
                Some(false) => {
                    cur.pop();
                }
                other => return other,
            }
        }
    }
    Some(false)
}

pub fn bad_search(p: &FinPoset, bounds: SearchBounds) -> BadSearch {
    bad_search_by(p.size(), |i, j| p.le(i, j), bounds)
}

/// `p_i ≰ p_j` for all `i < j`.
pub fn is_bad(seq: &[usize], le: impl Fn(usize, usize) -> bool) -> bool {
    (0..seq.len()).all(|i| (i + 1..seq.len()).all(|j| !le(seq[i], seq[j])))
}

/// Output of [`token_antichain`].
#[derive(Clone, Debug)]
pub struct TokenAntichain {
    /// `Z + Z* + a` with `Z` a chain of the requested length.
    pub y: FinPoset,
    /// `τ_z = W(f_z)(σ)` for `z = 0, ..., L-1`.
    pub elems: Vec<DilElem>,
    /// Some `(y, z)` with `y ≠ z` and `τ_y <= τ_z`; absent for normal dilators.
    pub comparable: Option<(usize, usize)>,
}

impl TokenAntichain {
    pub fn is_antichain(&self) -> bool {
        self.comparable.is_none()
    }
}

/// Sends the two distinguished points `x0 = 0`, `x1 = 1` of the shape of
/// `token` into a chain and its reverse, indexed by `z < len`, and reads the
/// token through each such map.
pub fn token_antichain(d: &CodedDilator, token: TokenIdx, len: usize) -> Result<TokenAntichain> {
    if d.is_unary() {
        return Err(Error::Precondition(format!(
            "{} is unary: no token has two support points",
            d.name()
        )));
    }
    let c = d.token(token).shape.clone();
    let k = c.size();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "token {} has {k} support points, two are needed",
            d.token_id(token)
        )));
    }
    let y = sum_order(
        &[FinPoset::chain(len), FinPoset::chain(len), FinPoset::antichain(k)],
        &[false, true, false],
    );
    let sigma = d.elem(c.poset(), &(0..k).collect::<Vec<_>>(), token)?;
    let elems = (0..len)
        .map(|z| {
            let mut f: Vec<usize> = (0..k).map(|x| 2 * len + x).collect();
            f[0] = z;
            f[1] = len + z;
            d.apply_values(c.poset(), &y, &f, &sigma)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut comparable = None;
    'outer: for a in 0..len {
        for b in 0..len {
            if a != b && d.leq(&y, &elems[a], &elems[b])? {
                comparable = Some((a, b));
                break 'outer;
            }
        }
    }
    Ok(TokenAntichain { y, elems, comparable })
}

/// Output of [`ladder_bad_sequence`].
#[derive(Clone, Debug)]
pub struct Ladder {
    /// `n × K` with `n` the size of the witness shape; `(i, k)` is `i * K + k`.
    pub host: FinPoset,
    /// `W(h_k)(σ)` for `k = 0, ..., K-1`.
    pub elems: Vec<DilElem>,
    /// Whether the witness had to be moved into `Y × 2` to make the ranges of
    /// `f` and `g` meet only at common values.
    pub lifted: bool,
    /// Result of the pairwise re-check: no `W(h_k)(σ) <= W(h_l)(σ)` for `k < l`.
    pub bad: bool,
}

/// Turns a failure of monotonicity into a bad sequence of length `len`.
///
/// With `f <= g` and `W(f)(σ) ≰ W(g)(σ)`, the maps `h_k(x_i) = (i, 0)` if
/// `f(x_i) = g(x_i)` and `(i, k)` otherwise give a sequence `W(h_k)(σ)` in
/// which no entry lies below a later one.
pub fn ladder_bad_sequence(d: &CodedDilator, w: Option<&MonotoneWitness>, len: usize) -> Result<Ladder> {
    let w = w.ok_or_else(|| Error::Precondition("no monotonicity witness supplied".into()))?;
    let c = &w.c;
    let n = c.size();
    if w.f.len() != n || w.g.len() != n {
        return Err(Error::Precondition("witness maps do not match the shape".into()));
    }
    let sigma = d.elem(c.poset(), &(0..n).collect::<Vec<_>>(), w.token)?;
    let y = &w.y;
    let fails = |y: &FinPoset, f: &[usize], g: &[usize]| -> Result<bool> {
        if !f.iter().zip(g).all(|(&a, &b)| y.le(a, b)) {
            return Ok(false);
        }
        let (fs, gs) = (
            d.apply_values(c.poset(), y, f, &sigma)?,
            d.apply_values(c.poset(), y, g, &sigma)?,
        );
        Ok(!d.leq(y, &fs, &gs)?)
    };
    if !fails(y, &w.f, &w.g)? {
        return Err(Error::Precondition(
            "not a monotonicity witness: W(f)(σ) <= W(g)(σ)".into(),
        ));
    }
    let meets_apart = |f: &[usize], g: &[usize]| (0..n).all(|a| (0..n).all(|b| a == b || f[a] != g[b]));
    let (mut f, mut g, mut lifted) = (w.f.clone(), w.g.clone(), false);
    if !meets_apart(&f, &g) {
        // in Y × 2, ι∘f <= f⁺ <= ι∘g and both pairs meet only at common values
        let y2 = y.lex_times_two();
        let iota_f: Vec<usize> = f.iter().map(|&v| 2 * v).collect();
        let iota_g: Vec<usize> = g.iter().map(|&v| 2 * v).collect();
        let plus: Vec<usize> = (0..n).map(|i| 2 * f[i] + usize::from(f[i] != g[i])).collect();
        if fails(&y2, &iota_f, &plus)? {
            (f, g) = (iota_f, plus);
        } else if fails(&y2, &plus, &iota_g)? {
            (f, g) = (plus, iota_g);
        } else {
            return Err(Error::Structural(
                "neither half of the lifted witness fails; the dilator is not transitive".into(),
            ));
        }
        lifted = true;
    }
    let host = FinPoset::antichain(n).product(&FinPoset::chain(len));
    let elems = (0..len)
        .map(|k| {
            let h: Vec<usize> = (0..n).map(|i| i * len + if f[i] == g[i] { 0 } else { k }).collect();
            d.apply_values(c.poset(), &host, &h, &sigma)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bad = true;
    for k in 0..len {
        for l in k + 1..len {
            if d.leq(&host, &elems[k], &elems[l])? {
                bad = false;
            }
        }
    }
    Ok(Ladder {
        host,
        elems,
        lifted,
        bad,
    })
}

/// A strictly descending chain below `from` of at most `steps` terms.
///
/// Each step drops a trailing least entry, or lowers the last entry and pads
/// with copies of the lowered value so that the remaining budget can still
/// be spent.
pub fn descent_search(level: u8, from: &OrdTerm, steps: usize) -> Result<Vec<OrdTerm>> {
    if from.level() != level {
        return Err(Error::Mismatch(format!(
            "term has level {}, expected {level}",
            from.level()
        )));
    }
    let mut out: Vec<OrdTerm> = Vec::new();
    let mut cur = from.clone();
    while out.len() < steps {
        let left = steps - out.len() - 1;
        let Some(next) = below(&cur, left) else { break };
        debug_assert!(ord_cmp(&next, &cur)? == std::cmp::Ordering::Less);
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// A term just below `t` that still leaves room for `left` further steps.
fn below(t: &OrdTerm, left: usize) -> Option<OrdTerm> {
    let (last, init) = t.entries().split_last()?;
    let mut entries = init.to_vec();
    if last.level() > 0 {
        if let Some(smaller) = below(last, left) {
            entries.extend(std::iter::repeat_n(smaller, left.max(1)));
        }
    }
    OrdTerm::new(t.level(), entries).ok()
}

#[cfg(test)]
mod tests;
