//! Axiom checks, normality and monotonicity.
//!
//! Every clause is a finite conjunction over canonical posets up to a size
//! that suffices for the derived order; [`Bounds`] may cut that size down, in
//! which case the clause reports how far it got.

use std::fmt;

use super::{CodedDilator, DilElem, TableKey, TokenIdx};
use crate::error::{Error, Result};
use crate::limits;
use crate::orders::{
    all_canonical, automorphisms, bijective_quasi_embeddings, canonical_form, enumerate_maps, CanonicalPoset, FinPoset,
    MapKind, QeMap,
};

/// Largest poset sizes the checks visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Shapes of tokens: action, functoriality, reflexivity.
    pub shape: usize,
    /// Posets carrying table keys: equivariance, antisymmetry, reflection,
    /// normality, and embedding preservation.
    pub table: usize,
    /// Hosts for transitivity and targets for monotonicity.
    pub host: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        let cap = limits::poset_cap();
        Bounds {
            shape: cap,
            table: cap,
            host: cap,
        }
    }
}

impl Bounds {
    pub fn uniform(n: usize) -> Self {
        Bounds {
            shape: n,
            table: n,
            host: n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseReport {
    pub name: &'static str,
    /// Dilator axioms decide validity; normality is reported alongside.
    pub axiom: bool,
    pub passed: bool,
    pub checked_up_to: usize,
    pub required: usize,
    pub witness: Option<String>,
}

impl ClauseReport {
    pub fn complete(&self) -> bool {
        self.checked_up_to >= self.required
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub dilator: String,
    pub clauses: Vec<ClauseReport>,
}

impl ValidationReport {
    /// All axiom clauses passed.
    pub fn valid(&self) -> bool {
        self.clauses.iter().filter(|c| c.axiom).all(|c| c.passed)
    }

    pub fn complete(&self) -> bool {
        self.clauses.iter().all(ClauseReport::complete)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseReport> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn normal(&self) -> bool {
        self.clause("normality").is_some_and(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            write!(
                f,
                "{:<22} {}  size {}/{}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.checked_up_to,
                c.required
            )?;
            if let Some(w) = &c.witness {
                write!(f, "  {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type Verdict = std::result::Result<(), String>;

fn clause(
    name: &'static str,
    axiom: bool,
    required: usize,
    cap: usize,
    run: impl FnOnce(usize) -> Verdict,
) -> ClauseReport {
    let upto = required.min(cap);
    let v = run(upto);
    ClauseReport {
        name,
        axiom,
        passed: v.is_ok(),
        checked_up_to: upto,
        required,
        witness: v.err(),
    }
}

fn compose(q1: &QeMap, q2: &QeMap) -> QeMap {
    QeMap {
        to: q2.to.clone(),
        map: q1.map.iter().map(|&i| q2.map[i]).collect(),
    }
}

fn is_identity(q: &QeMap, c: &CanonicalPoset) -> bool {
    q.to == *c && q.map.iter().enumerate().all(|(i, &v)| i == v)
}

fn covers(p: &FinPoset) -> Vec<(usize, usize)> {
    let n = p.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if p.lt(i, j) && !(0..n).any(|m| p.lt(i, m) && p.lt(m, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn mask_of(points: &[usize]) -> u32 {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

fn points_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

impl CodedDilator {
    /// The two elements of `W(d)` a key compares.
    pub(crate) fn key_elems(&self, key: &TableKey) -> (DilElem, DilElem) {
        (
            DilElem::raw(points_of(key.s), key.sigma),
            DilElem::raw(points_of(key.t), key.tau),
        )
    }

    fn key_from(&self, d: &CanonicalPoset, x: &DilElem, y: &DilElem) -> TableKey {
        TableKey {
            d: d.id(),
            s: mask_of(&x.support),
            sigma: x.token,
            t: mask_of(&y.support),
            tau: y.token,
        }
    }

    fn tokens_up_to(&self, k: usize) -> impl Iterator<Item = (TokenIdx, &super::TraceToken)> {
        self.trace
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.shape.size() <= k)
            .map(|(i, t)| (i as TokenIdx, t))
    }

    fn check_action(&self, k: usize) -> Verdict {
        for (i, tok) in self.tokens_up_to(k) {
            for q in bijective_quasi_embeddings(&tok.shape).iter() {
                if !self.has_action(i, q) {
                    return Err(format!(
                        "no action entry for {} along {:?} into {}",
                        tok.id, q.map, q.to
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_functoriality(&self, k: usize) -> Verdict {
        for (i, tok) in self.tokens_up_to(k) {
            let out = bijective_quasi_embeddings(&tok.shape);
            for q1 in out.iter() {
                let Ok(mid) = self.act(i, q1) else { continue };
                if is_identity(q1, &tok.shape) && mid != i {
                    return Err(format!("identity moves {}", tok.id));
                }
                for q2 in bijective_quasi_embeddings(&q1.to).iter() {
                    let (Ok(a), Ok(b)) = (self.act(mid, q2), self.act(i, &compose(q1, q2))) else {
                        continue;
                    };
                    if a != b {
                        return Err(format!(
                            "{} along {:?} then {:?} gives {}, the composite gives {}",
                            tok.id,
                            q1.map,
                            q2.map,
                            self.token_id(a),
                            self.token_id(b)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_reflexivity(&self, k: usize) -> Verdict {
        for (i, tok) in self.tokens_up_to(k) {
            let full = (1u32 << tok.shape.size()) - 1;
            let key = TableKey {
                d: tok.shape.id(),
                s: full,
                sigma: i,
                t: full,
                tau: i,
            };
            if !self.table_value(&key) {
                return Err(format!("{} is not below itself", tok.id));
            }
        }
        Ok(())
    }

    /// Transports both sides of `key` along `f: d -> to`.
    fn moved_key(&self, key: &TableKey, d: &CanonicalPoset, to: &CanonicalPoset, f: &[usize]) -> Option<TableKey> {
        let (x, y) = self.key_elems(key);
        let fx = self.apply_values(d.poset(), to.poset(), f, &x).ok()?;
        let fy = self.apply_values(d.poset(), to.poset(), f, &y).ok()?;
        Some(self.key_from(to, &fx, &fy))
    }

    fn check_equivariance(&self, k: usize) -> Verdict {
        self.for_each_key_checked(k, |d, key| {
            let v = self.table_value(key);
            for alpha in automorphisms(d).iter().skip(1) {
                let Some(moved) = self.moved_key(key, d, d, alpha) else {
                    continue;
                };
                if self.table_value(&moved) != v {
                    return Err(format!(
                        "{} is {v} but its image under {alpha:?} is not",
                        self.show_key(key)
                    ));
                }
            }
            Ok(())
        })
    }

    fn check_antisymmetry(&self, k: usize) -> Verdict {
        self.for_each_key_checked(k, |_, key| {
            if key.s == key.t && key.sigma == key.tau {
                return Ok(());
            }
            let rev = TableKey {
                d: key.d,
                s: key.t,
                sigma: key.tau,
                t: key.s,
                tau: key.sigma,
            };
            if self.table_value(key) && self.table_value(&rev) {
                return Err(format!("{} holds in both directions", self.show_key(key)));
            }
            Ok(())
        })
    }

    /// Every bijective quasi-embedding out of `d` is an isomorphism after a
    /// run of single cover deletions, so with equivariance it suffices to
    /// check that deleting one cover keeps a false entry false.
    fn check_reflection(&self, k: usize) -> Verdict {
        self.for_each_key_checked(k, |d, key| {
            if self.table_value(key) {
                return Ok(());
            }
            for (i, j) in covers(d.poset()) {
                let weaker = FinPoset::from_fn(d.size(), |a, b| d.le(a, b) && (a, b) != (i, j))
                    .expect("deleting a cover leaves a partial order");
                let (to, order) = canonical_form(&weaker);
                let mut f = vec![0; d.size()];
                for (c, &o) in order.iter().enumerate() {
                    f[o] = c;
                }
                let Some(moved) = self.moved_key(key, d, &to, &f) else {
                    continue;
                };
                if self.table_value(&moved) {
                    return Err(format!(
                        "{} fails but holds after dropping {i} < {j} (image {})",
                        self.show_key(key),
                        self.show_key(&moved)
                    ));
                }
            }
            Ok(())
        })
    }

    fn check_normality(&self, k: usize) -> Verdict {
        self.for_each_key_checked(k, |d, key| {
            if !self.table_value(key) {
                return Ok(());
            }
            let t = points_of(key.t);
            for x in points_of(key.s) {
                if !t.iter().any(|&y| d.le(x, y)) {
                    return Err(format!(
                        "{} holds but point {x} lies below no point of the right support",
                        self.show_key(key)
                    ));
                }
            }
            Ok(())
        })
    }

    fn for_each_key_checked(&self, k: usize, mut f: impl FnMut(&CanonicalPoset, &TableKey) -> Verdict) -> Verdict {
        let mut failure = None;
        let r = self.for_each_key(k, &mut |d, key| match f(d, key) {
            Ok(()) => Ok(()),
            Err(w) => {
                failure = Some(w);
                Err(Error::Structural(String::new()))
            }
        });
        match (r, failure) {
            (_, Some(w)) => Err(w),
            (Err(e), None) => Err(e.to_string()),
            (Ok(()), None) => Ok(()),
        }
    }

    /// Elements of `W(c)` whose support is all of `c`.
    fn full_elements(&self, c: &CanonicalPoset) -> Vec<DilElem> {
        let all: Vec<usize> = (0..c.size()).collect();
        self.tokens_of_shape(c)
            .iter()
            .map(|&t| DilElem::raw(all.clone(), t))
            .collect()
    }

    fn check_embeddings(&self, k: usize) -> Verdict {
        let err = |e: Error| e.to_string();
        for kx in 0..=k {
            for x in all_canonical(kx).iter() {
                // pairs covering `x`; other pairs are covered by smaller `x`
                let elems = self.elements(x.poset());
                let full = (1u32 << kx) - 1;
                let masks: Vec<u32> = elems.iter().map(|e| mask_of(&e.support)).collect();
                let mut pairs = Vec::new();
                for i in 0..elems.len() {
                    for j in 0..elems.len() {
                        if (masks[i] | masks[j]) == full {
                            pairs.push((i, j, self.leq(x.poset(), &elems[i], &elems[j]).map_err(err)?));
                        }
                    }
                }
                if pairs.is_empty() {
                    continue;
                }
                // the order on `W(y)` reads only the union of the supports
                for ky in kx..=(kx + 1).min(k) {
                    for y in all_canonical(ky).iter() {
                        for f in enumerate_maps(x.poset(), y.poset(), MapKind::Embedding).map_err(err)? {
                            let img = elems
                                .iter()
                                .map(|e| self.apply_map(&f, e))
                                .collect::<Result<Vec<_>>>()
                                .map_err(err)?;
                            for &(i, j, v) in &pairs {
                                if self.leq(y.poset(), &img[i], &img[j]).map_err(err)? != v {
                                    return Err(format!(
                                        "embedding {:?} of {x} into {y} changes {} <= {} from {v}",
                                        f.values(),
                                        self.show(&elems[i]),
                                        self.show(&elems[j])
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_transitivity(&self, k: usize) -> Verdict {
        for kc in 0..=k {
            for c in all_canonical(kc).iter() {
                self.transitive_on(c)?;
            }
        }
        Ok(())
    }

    /// Transitivity on triples whose supports cover `c`.
    fn transitive_on(&self, c: &CanonicalPoset) -> Verdict {
        let host = c.poset();
        let elems = self.elements(host);
        let n = elems.len();
        let full = (1u32 << c.size()) - 1;
        let masks: Vec<u32> = elems.iter().map(|e| mask_of(&e.support)).collect();
        let mut m = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.leq(host, &elems[i], &elems[j]).map_err(|e| e.to_string())?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !m[i * n + j] {
                    continue;
                }
                for l in 0..n {
                    if m[j * n + l] && !m[i * n + l] && (masks[i] | masks[j] | masks[l]) == full {
                        return Err(format!(
                            "{} <= {} <= {} but not {} <= {} over {c}",
                            self.show(&elems[i]),
                            self.show(&elems[j]),
                            self.show(&elems[l]),
                            self.show(&elems[i]),
                            self.show(&elems[l])
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Runs every clause with the default bounds.
pub fn validate(d: &CodedDilator) -> ValidationReport {
    validate_with(d, &Bounds::default())
}

pub fn validate_with(d: &CodedDilator, b: &Bounds) -> ValidationReport {
    let n = d.n_max();
    let mut clauses = vec![clause("action", true, n, b.shape, |k| d.check_action(k))];
    let total = clauses[0].passed;
    // later clauses read the action, so a partial action stops them here
    let guarded = |name, required, cap, run: &dyn Fn(usize) -> Verdict| {
        clause(name, true, required, cap, |k| {
            if total {
                run(k)
            } else {
                Err("skipped: the action is incomplete".into())
            }
        })
    };
    clauses.push(guarded("functoriality", n, b.shape, &|k| d.check_functoriality(k)));
    clauses.push(guarded("reflexivity", n, b.shape, &|k| d.check_reflexivity(k)));
    clauses.push(guarded("equivariance", 2 * n, b.table, &|k| d.check_equivariance(k)));
    clauses.push(guarded("antisymmetry", 2 * n, b.table, &|k| d.check_antisymmetry(k)));
    clauses.push(guarded("transitivity", 3 * n, b.host, &|k| d.check_transitivity(k)));
    clauses.push(guarded("embeddings", 2 * n, b.table, &|k| d.check_embeddings(k)));
    clauses.push(guarded("quasi-embeddings", 2 * n, b.table, &|k| d.check_reflection(k)));
    let mut normal = clause("normality", false, 2 * n, b.table, |k| d.check_normality(k));
    normal.axiom = false;
    clauses.push(normal);
    ValidationReport {
        dilator: d.name().to_string(),
        clauses,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalReport {
    pub normal: bool,
    pub witness: Option<String>,
    pub checked_up_to: usize,
    pub required: usize,
}

pub fn is_normal(d: &CodedDilator) -> NormalReport {
    is_normal_with(d, &Bounds::default())
}

pub fn is_normal_with(d: &CodedDilator, b: &Bounds) -> NormalReport {
    let c = clause("normality", false, 2 * d.n_max(), b.table, |k| d.check_normality(k));
    NormalReport {
        normal: c.passed,
        witness: c.witness,
        checked_up_to: c.checked_up_to,
        required: c.required,
    }
}

/// A failure of monotonicity: quasi-embeddings `f <= g: c -> y` with
/// `W(f)(σ) ≰ W(g)(σ)` for the full-support element `σ` carrying `token`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub c: CanonicalPoset,
    pub token: TokenIdx,
    pub y: FinPoset,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub monotone: bool,
    pub witness: Option<MonotoneWitness>,
    pub checked_up_to: usize,
    pub required: usize,
}

impl MonotoneReport {
    pub fn complete(&self) -> bool {
        self.checked_up_to >= self.required
    }
}

pub fn is_monotone(d: &CodedDilator) -> Result<MonotoneReport> {
    is_monotone_with(d, &Bounds::default())
}

/// Checks `W(f)(σ) <= W(g)(σ)` for full-support `σ` over every shape `c` and
/// quasi-embeddings `f <= g: c -> Y` whose ranges cover `Y`, so `|Y| <= 2|c|`.
pub fn is_monotone_with(d: &CodedDilator, b: &Bounds) -> Result<MonotoneReport> {
    let required = 2 * d.max_shape();
    let upto = required.min(b.host);
    for kc in 0..=d.max_shape().min(upto) {
        for c in all_canonical(kc).iter() {
            let sigmas = d.full_elements(c);
            if sigmas.is_empty() {
                continue;
            }
            for ky in kc..=(2 * kc).min(upto) {
                for y in all_canonical(ky).iter() {
                    let qes = enumerate_maps(c.poset(), y.poset(), MapKind::QuasiEmbedding)?;
                    let full = (1u64 << ky) - 1;
                    for f in &qes {
                        let rf = f.values().iter().fold(0u64, |m, &v| m | 1 << v);
                        for g in &qes {
                            let rg = g.values().iter().fold(0u64, |m, &v| m | 1 << v);
                            if (rf | rg) != full || !f.values().iter().zip(g.values()).all(|(&a, &b)| y.le(a, b)) {
                                continue;
                            }
                            for s in &sigmas {
                                let fs = d.apply_map(f, s)?;
                                let gs = d.apply_map(g, s)?;
                                if !d.leq(y.poset(), &fs, &gs)? {
                                    return Ok(MonotoneReport {
                                        monotone: false,
                                        witness: Some(MonotoneWitness {
                                            c: c.clone(),
                                            token: s.token,
                                            y: y.poset().clone(),
                                            f: f.values().to_vec(),
                                            g: g.values().to_vec(),
                                        }),
                                        checked_up_to: upto,
                                        required,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(MonotoneReport {
        monotone: true,
        witness: None,
        checked_up_to: upto,
        required,
    })
}

/// For unary dilators with finite trace, preserving well partial orders is
/// equivalent to monotonicity, so the monotonicity check decides it.
pub fn unary_wpo_decision(d: &CodedDilator) -> Result<bool> {
    if !d.is_unary() {
        return Err(Error::Precondition(format!("{} is not unary", d.name())));
    }
    Ok(is_monotone(d)?.monotone)
}

impl MonotoneWitness {
    pub fn show(&self, d: &CodedDilator) -> String {
        format!(
            "token {} over {}, Y = {}, f = {:?}, g = {:?}",
            d.token_id(self.token),
            self.c,
            self.y.to_json(),
            self.f,
            self.g
        )
    }
}
