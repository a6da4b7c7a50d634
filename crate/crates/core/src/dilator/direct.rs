//! The built-in constructions read directly, bypassing the table coding.
//! Used as an oracle for the derived order.

use super::{CodedDilator, DilElem, Origin, TokenPayload};
use crate::orders::canonical::induced_sorted;
use crate::orders::FinPoset;

/// An element of a built-in `W(X)` in the construction's own terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoded {
    /// `<x_0, ..., x_{k-1}>` for sequences and tuples.
    Word(Vec<usize>),
    One,
    Pair(usize, usize),
    Empty(usize),
    Point(usize, usize),
    Star,
    Plus,
    Triple(usize, usize, Box<Decoded>),
}

/// Reads `x` over `host` as an element of the construction that built `d`.
pub fn decode(d: &CodedDilator, host: &FinPoset, x: &DilElem) -> Option<Decoded> {
    let en = induced_sorted(host, x.support()).en;
    let tok = d.token(x.token());
    Some(match (&tok.payload, d.origin()) {
        (TokenPayload::Seq(w) | TokenPayload::Tuple(w), _) => Decoded::Word(w.iter().map(|&i| en[i]).collect()),
        (TokenPayload::WzOne, _) => Decoded::One,
        (TokenPayload::WzPair(z), _) => Decoded::Pair(*z, en[0]),
        (TokenPayload::UnaryEmpty(i), _) => Decoded::Empty(*i),
        (TokenPayload::UnaryPoint(i), _) => Decoded::Point(*i, en[0]),
        (TokenPayload::Star, _) => Decoded::Star,
        (TokenPayload::Plus, _) => Decoded::Plus,
        (TokenPayload::Triple { x: a, y: b, inner }, Origin::Prime(w)) => {
            let sub = w.apply_values(tok.shape.poset(), host, &en, inner).ok()?;
            Decoded::Triple(en[*a], en[*b], Box::new(decode(w, host, &sub)?))
        }
        _ => return None,
    })
}

/// Some strictly increasing `f` with `s[i] <= t[f(i)]`, by exhaustive search.
fn embeds(x: &FinPoset, s: &[usize], t: &[usize]) -> bool {
    match s.split_first() {
        None => true,
        Some((&a, rest)) => (0..t.len()).any(|j| x.le(a, t[j]) && embeds(x, rest, &t[j + 1..])),
    }
}

/// The order of the construction on decoded elements; `None` for dilators
/// without a direct reading.
pub fn direct_leq(d: &CodedDilator, host: &FinPoset, a: &Decoded, b: &Decoded) -> Option<bool> {
    use Decoded::*;
    Some(match (d.origin(), a, b) {
        (Origin::Seq(_), Word(s), Word(t)) => embeds(host, s, t),
        (Origin::Product(_), Word(s), Word(t)) => s.len() == t.len() && s.iter().zip(t).all(|(&p, &q)| host.le(p, q)),
        (Origin::Wz(_), One, One) => true,
        (Origin::Wz(z), Pair(z1, x1), Pair(z2, x2)) => z.le(*z1, *z2) && host.le(*x1, *x2),
        (Origin::Wz(_), _, _) => false,
        (Origin::Unary(spec), _, _) => {
            let has = |rel: &[(usize, usize)], i: &usize, j: &usize| rel.contains(&(*i, *j));
            match (a, b) {
                (Empty(i), Empty(j)) => i == j || has(&spec.empty_le, i, j),
                (Empty(i), Point(j, _)) => has(&spec.empty_below_point, i, j),
                (Point(i, x), Point(j, y)) if x == y => i == j || has(&spec.same_point, i, j),
                (Point(i, x), Point(j, y)) if host.lt(*x, *y) => has(&spec.lower_to_upper, i, j),
                (Point(i, x), Point(j, y)) if host.lt(*y, *x) => has(&spec.upper_to_lower, i, j),
                _ => false,
            }
        }
        (Origin::Prime(_), Star, Star) | (Origin::Prime(_), Plus, Plus) => true,
        (Origin::Prime(w), Triple(x1, y1, s1), Triple(x2, y2, s2)) => {
            host.le(*x1, *x2) && host.le(*y1, *y2) && direct_leq(w, host, s1, s2)?
        }
        (Origin::Prime(_), _, _) => false,
        _ => return None,
    })
}

/// Every element of the built-in `W(host)` listed from its definition.
pub fn direct_universe(d: &CodedDilator, host: &FinPoset) -> Option<Vec<Decoded>> {
    let k = host.size();
    let words = |lens: std::ops::Range<usize>| {
        let mut out = Vec::new();
        for len in lens {
            let mut w = vec![0; len];
            loop {
                out.push(Decoded::Word(w.clone()));
                let Some(i) = (0..len).rev().find(|&i| w[i] + 1 < k) else {
                    break;
                };
                w[i] += 1;
                for v in &mut w[i + 1..] {
                    *v = 0;
                }
            }
            if k == 0 && len > 0 {
                out.pop();
            }
        }
        out
    };
    let mut out = match d.origin() {
        Origin::Seq(n) => words(0..*n),
        Origin::Product(n) => words(*n..*n + 1),
        Origin::Wz(z) => {
            let mut v = vec![Decoded::One];
            for i in 0..z.size() {
                v.extend((0..k).map(|x| Decoded::Pair(i, x)));
            }
            v
        }
        Origin::Unary(spec) => {
            let mut v: Vec<Decoded> = (0..spec.empties.len()).map(Decoded::Empty).collect();
            for i in 0..spec.points.len() {
                v.extend((0..k).map(|x| Decoded::Point(i, x)));
            }
            v
        }
        Origin::Prime(w) => {
            let mut v = vec![Decoded::Star, Decoded::Plus];
            let inner = direct_universe(w, host)?;
            for x in 0..k {
                for y in 0..k {
                    if x != y {
                        v.extend(inner.iter().map(|s| Decoded::Triple(x, y, Box::new(s.clone()))));
                    }
                }
            }
            v
        }
        _ => return None,
    };
    out.sort();
    Some(out)
}
