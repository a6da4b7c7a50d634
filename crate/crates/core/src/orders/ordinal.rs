//! Terms of the iterated orders `ω^X`: non-increasing finite sequences
//! compared lexicographically, where a proper prefix precedes its extensions.
//!
//! Level 0 is the one-point order, so a level-1 term is a sequence of units
//! and stands for a natural number. Levels 2 and 3 give `ω^ω` and `ω^{ω^ω}`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_LEVEL: u8 = 3;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrdTerm {
    level: u8,
    entries: Vec<OrdTerm>,
}

impl OrdTerm {
    fn unit() -> OrdTerm {
        OrdTerm {
            level: 0,
            entries: Vec::new(),
        }
    }

    /// The level-1 term for `k`.
    pub fn nat(k: usize) -> OrdTerm {
        OrdTerm {
            level: 1,
            entries: vec![Self::unit(); k],
        }
    }

    /// The empty sequence, the least term of its level.
    pub fn zero(level: u8) -> OrdTerm {
        OrdTerm {
            level,
            entries: Vec::new(),
        }
    }

    pub fn new(level: u8, entries: Vec<OrdTerm>) -> Result<OrdTerm> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::Precondition(format!("level {level} is not 1, 2 or 3")));
        }
        if entries.iter().any(|e| e.level + 1 != level) {
            return Err(Error::Mismatch(format!(
                "entries of a level-{level} term must have level {}",
                level - 1
            )));
        }
        if entries.windows(2).any(|w| cmp_same(&w[0], &w[1]) == Ordering::Less) {
            return Err(Error::Precondition("entries must be non-increasing".into()));
        }
        Ok(OrdTerm { level, entries })
    }

    /// A level-2 term from its natural-number entries.
    pub fn level2(entries: &[usize]) -> Result<OrdTerm> {
        Self::new(2, entries.iter().map(|&k| Self::nat(k)).collect())
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn entries(&self) -> &[OrdTerm] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The value of a level-1 term.
    pub fn as_nat(&self) -> Option<usize> {
        (self.level == 1).then_some(self.entries.len())
    }

    /// Parses `3` at level 1, `<2,0,0>` at level 2 and `<<2>,<1,1>>` at level 3.
    pub fn parse(level: u8, text: &str) -> Result<OrdTerm> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (t, rest) = parse_at(level, &text)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing input {rest:?}")));
        }
        Ok(t)
    }

    /// All terms of level 2 with entries at most `max_entry` and at most
    /// `max_len` entries, in increasing order.
    pub fn enumerate_level2(max_entry: usize, max_len: usize) -> Vec<OrdTerm> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(cur: &mut Vec<usize>, cap: usize, max_len: usize, out: &mut Vec<OrdTerm>) {
            out.push(OrdTerm::level2(cur).expect("non-increasing by construction"));
            if cur.len() == max_len {
                return;
            }
            for e in 0..=cap {
                cur.push(e);
                go(cur, e, max_len, out);
                cur.pop();
            }
        }
        go(&mut cur, max_entry, max_len, &mut out);
        out.sort_by(cmp_same);
        out
    }
}

fn parse_at(level: u8, s: &str) -> Result<(OrdTerm, &str)> {
    match level {
        1 => {
            let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
            let k: usize = s[..end]
                .parse()
                .map_err(|_| Error::Parse(format!("expected a natural number at {s:?}")))?;
            Ok((OrdTerm::nat(k), &s[end..]))
        }
        2 | 3 => {
            let mut rest = s
                .strip_prefix('<')
                .ok_or_else(|| Error::Parse(format!("expected '<' at {s:?}")))?;
            let mut entries = Vec::new();
            if let Some(r) = rest.strip_prefix('>') {
                return Ok((OrdTerm::new(level, entries)?, r));
            }
            loop {
                let (e, r) = parse_at(level - 1, rest)?;
                entries.push(e);
                if let Some(r) = r.strip_prefix(',') {
                    rest = r;
                } else if let Some(r) = r.strip_prefix('>') {
                    return Ok((OrdTerm::new(level, entries)?, r));
                } else {
                    return Err(Error::Parse(format!("expected ',' or '>' at {r:?}")));
                }
            }
        }
        _ => Err(Error::Precondition(format!("level {level} is not 1, 2 or 3"))),
    }
}

fn cmp_same(s: &OrdTerm, t: &OrdTerm) -> Ordering {
    for (a, b) in s.entries.iter().zip(&t.entries) {
        match cmp_same(a, b) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    s.entries.len().cmp(&t.entries.len())
}

/// Lexicographic comparison of two terms of the same level.
pub fn ord_cmp(s: &OrdTerm, t: &OrdTerm) -> Result<Ordering> {
    if s.level != t.level {
        return Err(Error::Mismatch(format!("levels {} and {} differ", s.level, t.level)));
    }
    Ok(cmp_same(s, t))
}

pub fn ord_leq(s: &OrdTerm, t: &OrdTerm) -> Result<bool> {
    Ok(ord_cmp(s, t)? != Ordering::Greater)
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "*"),
            1 => write!(f, "{}", self.entries.len()),
            _ => {
                write!(f, "<")?;
                for (i, e) in self.entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ">")
            }
        }
    }
}

impl fmt::Debug for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l2(e: &[usize]) -> OrdTerm {
        OrdTerm::level2(e).unwrap()
    }

    #[test]
    fn examples() {
        for t in OrdTerm::enumerate_level2(2, 2) {
            assert!(ord_leq(&OrdTerm::zero(2), &t).unwrap());
        }
        assert_eq!(ord_cmp(&l2(&[2, 0, 0]), &l2(&[2, 1])).unwrap(), Ordering::Less);
        assert_eq!(ord_cmp(&l2(&[1, 1]), &l2(&[2])).unwrap(), Ordering::Less);
        assert_eq!(ord_cmp(&l2(&[1]), &l2(&[1, 0])).unwrap(), Ordering::Less);
        assert!(ord_leq(&OrdTerm::nat(1), &l2(&[])).is_err());
    }

    #[test]
    fn level_one_is_the_naturals() {
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(ord_cmp(&OrdTerm::nat(a), &OrdTerm::nat(b)).unwrap(), a.cmp(&b));
            }
        }
    }

    #[test]
    fn rejects_increasing_entries() {
        assert!(OrdTerm::level2(&[0, 1]).is_err());
        assert!(OrdTerm::new(2, vec![l2(&[])]).is_err());
    }

    #[test]
    fn parse_and_print() {
        for text in ["3", "<>", "<2,0,0>", "<<2>,<1,1>,<>>"] {
            let level = match text {
                "3" => 1,
                t if t.starts_with("<<") => 3,
                _ => 2,
            };
            assert_eq!(OrdTerm::parse(level, text).unwrap().to_string(), text);
        }
        assert!(OrdTerm::parse(2, "<0,1>").is_err());
        assert!(OrdTerm::parse(2, "<1").is_err());
    }

    #[test]
    fn level_two_is_linear() {
        let terms = OrdTerm::enumerate_level2(3, 3);
        assert_eq!(terms.len(), 35);
        for s in &terms {
            for t in &terms {
                let st = ord_leq(s, t).unwrap();
                let ts = ord_leq(t, s).unwrap();
                assert!(st || ts);
                assert_eq!(st && ts, s == t);
                for u in &terms {
                    if st && ord_leq(t, u).unwrap() {
                        assert!(ord_leq(s, u).unwrap());
                    }
                }
            }
        }
    }
}
