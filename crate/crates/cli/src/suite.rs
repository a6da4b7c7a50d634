//! The property suite: every invariant of the library, run at the bounds of
//! a [`Profile`] and reported one verdict per line.
//!
//! Invariants are independent; a panic inside one is caught and reported as
//! its failure so that the rest still run.

use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;

use serde::Serialize;
use ukruskal::bridges::{
    check_map, delabel, fixpoint_to_tree, to_prime, tree_to_fixpoint, unary_to_seq, words, wz_iso, wz_word_to_term,
    MapCheck, PrimeTarget, UnaryAlphabet,
};
use ukruskal::dilator::direct::{decode, direct_leq, direct_universe};
use ukruskal::dilator::{
    all_empty_dilator, discrete_unary, flipped_seq3, is_monotone, is_normal, mixed_variance_product, parse_builtin,
    prime_transform, product_dilator, product_unary, reversed_unary, seq_dilator_with, unary_wpo_decision,
    validate_with, wz_dilator, Bounds, CodedDilator, HigmanFn,
};
use ukruskal::falsify::{
    bad_search, descent_search, is_bad, ladder_bad_sequence, token_antichain, BadSearch, SearchBounds,
};
use ukruskal::fixpoint::{FixTerm, TermSystem};
use ukruskal::orders::{all_canonical, higman_leq, ord_cmp, ord_leq, FinPoset, OrdTerm};
use ukruskal::trees::{enumerate_trees, full_tree, label_gadget, tree_leq, tree_leq_oracle, LabeledTree, TreeUniverse};

use crate::profile::Profile;

/// What the suite runs against. `higman` replaces the sequence comparison
/// inside every `seq` dilator, which is how mutations are injected.
#[derive(Clone, Copy)]
pub struct Config {
    pub profile: Profile,
    pub higman: HigmanFn,
}

impl Config {
    pub fn new(profile: Profile) -> Self {
        Config {
            profile,
            higman: higman_leq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub module: &'static str,
    pub name: &'static str,
    pub bound: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub profile: &'static str,
    pub passed: bool,
    pub invariants: Vec<Outcome>,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &Outcome> {
        self.invariants.iter().filter(|o| !o.passed)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for o in &self.invariants {
            let id = format!("{}.{}", o.module, o.name);
            let verdict = if o.passed { "pass" } else { "FAIL" };
            writeln!(out, "{verdict}  {id:<28} {:<34} {}", o.bound, o.detail).unwrap();
        }
        let failed = self.failed().count();
        writeln!(
            out,
            "profile {}: {} invariants, {} failed",
            self.profile,
            self.invariants.len(),
            failed
        )
        .unwrap();
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `Ok` carries a summary, `Err` the first counterexample.
type Check = Result<String, String>;

struct Invariant {
    module: &'static str,
    name: &'static str,
    bound: String,
    run: Box<dyn Fn(&Config) -> Check>,
}

fn inv(module: &'static str, name: &'static str, bound: String, run: impl Fn(&Config) -> Check + 'static) -> Invariant {
    Invariant {
        module,
        name,
        bound,
        run: Box::new(run),
    }
}

trait OrFail<T> {
    fn or_fail(self) -> Result<T, String>;
}

impl<T> OrFail<T> for ukruskal::Result<T> {
    fn or_fail(self) -> Result<T, String> {
        self.map_err(|e| e.to_string())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every invariant in a fixed order.
pub fn run(config: &Config) -> Report {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let invariants = all(&config.profile)
        .into_iter()
        .map(|i| {
            let verdict = panic::catch_unwind(AssertUnwindSafe(|| (i.run)(config))).unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
            let (passed, detail) = match verdict {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Outcome {
                module: i.module,
                name: i.name,
                bound: i.bound,
                passed,
                detail,
            }
        })
        .collect::<Vec<_>>();
    panic::set_hook(hook);
    Report {
        profile: config.profile.name,
        passed: invariants.iter().all(|o| o.passed),
        invariants,
    }
}

fn hosts(max: usize) -> Vec<FinPoset> {
    (0..=max)
        .flat_map(|k| all_canonical(k).iter().map(|c| c.poset().clone()).collect::<Vec<_>>())
        .collect()
}

/// The built-in corpus with `seq` rebuilt around the configured comparison.
fn builtins(c: &Config) -> Result<Vec<Arc<CodedDilator>>, String> {
    Ok(vec![
        Arc::new(seq_dilator_with(2, c.higman).or_fail()?),
        Arc::new(seq_dilator_with(3, c.higman).or_fail()?),
        Arc::new(product_dilator(1).or_fail()?),
        Arc::new(product_dilator(2).or_fail()?),
        Arc::new(wz_dilator(&FinPoset::chain(1)).or_fail()?),
        Arc::new(wz_dilator(&FinPoset::antichain(2)).or_fail()?),
    ])
}

fn unary_corpus() -> Result<Vec<Arc<CodedDilator>>, String> {
    Ok(vec![
        Arc::new(wz_dilator(&FinPoset::chain(1)).or_fail()?),
        Arc::new(wz_dilator(&FinPoset::antichain(2)).or_fail()?),
        Arc::new(product_unary(&FinPoset::chain(2)).or_fail()?),
        Arc::new(product_unary(&FinPoset::antichain(2)).or_fail()?),
    ])
}

fn rigged() -> Result<Vec<CodedDilator>, String> {
    Ok(vec![
        reversed_unary().or_fail()?,
        discrete_unary().or_fail()?,
        mixed_variance_product().or_fail()?,
    ])
}

/// Reflexivity, antisymmetry and transitivity of a relation on `0..n`, with
/// `same` deciding equality.
fn order_laws(n: usize, le: impl Fn(usize, usize) -> bool, same: impl Fn(usize, usize) -> bool) -> Result<(), usize> {
    let m: Vec<bool> = (0..n * n).map(|k| le(k / n, k % n)).collect();
    for i in 0..n {
        if !m[i * n + i] {
            return Err(i);
        }
        for j in 0..n {
            if i != j && m[i * n + j] && m[j * n + i] && !same(i, j) {
                return Err(i);
            }
            if !m[i * n + j] {
                continue;
            }
            for k in 0..n {
                if m[j * n + k] && !m[i * n + k] {
                    return Err(i);
                }
            }
        }
    }
    Ok(())
}

fn map_summary(r: &MapCheck) -> String {
    format!("{} pairs, preserved {}/{}", r.pairs, r.preserved, r.related)
}

fn map_verdict(what: &str, r: &MapCheck, show: impl Fn(usize) -> String) -> Result<(), String> {
    if let Some(&(i, j)) = r.reflection_failures.first() {
        return Err(format!(
            "{what}: images of {} and {} are related, arguments are not",
            show(i),
            show(j)
        ));
    }
    ensure(r.injective, || format!("{what}: not injective"))
}

fn all(p: &Profile) -> Vec<Invariant> {
    let p = *p;
    let mut v = Vec::new();

    v.push(inv("orders", "canonical-counts", "sizes <= 4".into(), |_| {
        let counts: Vec<usize> = (0..=4).map(|k| all_canonical(k).len()).collect();
        ensure(counts == [1, 1, 2, 5, 16], || format!("counts {counts:?}"))?;
        Ok(format!("{counts:?}"))
    }));
    v.push(inv(
        "orders",
        "higman-laws",
        format!("hosts <= {}, words <= 3", p.host.min(2)),
        move |_| {
            let mut n = 0;
            for x in hosts(p.host.min(2)) {
                let ws = words(x.size(), 3);
                n += ws.len();
                order_laws(ws.len(), |i, j| higman_leq(&x, &ws[i], &ws[j]), |i, j| ws[i] == ws[j])
                    .map_err(|i| format!("law broken at {:?} over {}", ws[i], x.to_json()))?;
            }
            Ok(format!("{n} words"))
        },
    ));
    v.push(inv(
        "orders",
        "ordinal-linear",
        format!("entries <= {}, length <= {}", p.ordinal_entry, p.ordinal_len),
        move |_| {
            let ts = OrdTerm::enumerate_level2(p.ordinal_entry, p.ordinal_len);
            let le = |i: usize, j: usize| ord_leq(&ts[i], &ts[j]).expect("same level");
            order_laws(ts.len(), le, |i, j| ts[i] == ts[j]).map_err(|i| format!("law broken at {}", ts[i]))?;
            for i in 0..ts.len() {
                for j in 0..ts.len() {
                    ensure(le(i, j) || le(j, i), || format!("{} and {} incomparable", ts[i], ts[j]))?;
                    let c = ord_cmp(&ts[i], &ts[j]).or_fail()?;
                    ensure(c == i.cmp(&j), || {
                        format!("{} vs {} out of enumeration order", ts[i], ts[j])
                    })?;
                }
            }
            Ok(format!("{} terms", ts.len()))
        },
    ));

    v.push(inv(
        "dilator",
        "oracle-agreement",
        format!("hosts <= {}", p.host),
        move |c| {
            let mut pairs = 0;
            for d in builtins(c)? {
                for x in hosts(p.host) {
                    let ev = d.eval_order(&x).or_fail()?;
                    let dec = ev
                        .elems
                        .iter()
                        .map(|e| decode(&d, &x, e).ok_or_else(|| format!("{}: cannot decode {}", d.name(), d.show(e))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut got = dec.clone();
                    got.sort();
                    let mut want = direct_universe(&d, &x).ok_or("no direct universe")?;
                    want.sort();
                    ensure(got == want, || {
                        format!("{}: elements over {} differ", d.name(), x.to_json())
                    })?;
                    for i in 0..dec.len() {
                        for j in 0..dec.len() {
                            pairs += 1;
                            let direct = direct_leq(&d, &x, &dec[i], &dec[j]).ok_or("no direct order")?;
                            ensure(ev.le(i, j) == direct, || {
                                format!(
                                    "{}: {} <= {} is {} but {} directly, over {}",
                                    d.name(),
                                    d.show(&ev.elems[i]),
                                    d.show(&ev.elems[j]),
                                    ev.le(i, j),
                                    direct,
                                    x.to_json()
                                )
                            })?;
                        }
                    }
                }
            }
            Ok(format!("{pairs} pairs"))
        },
    ));
    v.push(inv(
        "dilator",
        "validation",
        format!("posets <= {}", p.validate),
        move |c| {
            let ds = builtins(c)?;
            for d in &ds {
                let r = validate_with(d, &Bounds::uniform(p.validate));
                ensure(r.valid() && r.normal(), || format!("{}:\n{r}", d.name()))?;
            }
            Ok(format!("{} dilators", ds.len()))
        },
    ));
    v.push(inv(
        "dilator",
        "prime-validation",
        format!("posets <= {}", p.prime_validate),
        move |_| {
            let names = ["seq:1", "prod:1", "seq:2", "wz:1"];
            for name in names {
                let d = prime_transform(parse_builtin(name).or_fail()?).or_fail()?;
                let r = validate_with(&d, &Bounds::uniform(p.prime_validate));
                ensure(r.valid() && r.normal(), || format!("prime:{name}:\n{r}"))?;
            }
            Ok(format!("{} dilators", names.len()))
        },
    ));
    v.push(inv(
        "dilator",
        "rigged-rejected",
        format!("posets <= {}", p.validate),
        move |_| {
            let flipped = flipped_seq3().or_fail()?;
            let r = validate_with(&flipped, &Bounds::uniform(p.validate));
            ensure(!r.clause("transitivity").is_some_and(|c| c.passed), || {
                "flipped seq passes transitivity".into()
            })?;
            ensure(!is_normal(&reversed_unary().or_fail()?).normal, || {
                "reversed unary passes normality".into()
            })?;
            for d in rigged()? {
                ensure(!is_monotone(&d).or_fail()?.monotone, || {
                    format!("{} passes monotonicity", d.name())
                })?;
            }
            Ok("5 fixtures".into())
        },
    ));
    v.push(inv("dilator", "unary-decision", "finite trace".into(), |_| {
        for d in unary_corpus()? {
            ensure(unary_wpo_decision(&d).or_fail()?, || {
                format!("{} decided false", d.name())
            })?;
        }
        ensure(!unary_wpo_decision(&reversed_unary().or_fail()?).or_fail()?, || {
            "reversed unary decided true".into()
        })?;
        Ok("4 true, 1 false".into())
    }));
    v.push(inv("dilator", "prime-base", "host 1".into(), |_| {
        let names = ["seq:1", "seq:2", "prod:1", "wz:1"];
        for name in names {
            let d = prime_transform(parse_builtin(name).or_fail()?).or_fail()?;
            let ev = d.eval_order(&FinPoset::chain(1)).or_fail()?;
            ensure(ev.len() == 2 && !ev.le(0, 1) && !ev.le(1, 0), || {
                format!("prime:{name} over one point has {} elements", ev.len())
            })?;
        }
        Ok(format!("{} dilators", names.len()))
    }));

    v.push(inv(
        "fixpoint",
        "order-laws",
        format!("height <= {}, terms <= {}", p.term_height, p.term_max),
        move |c| {
            let mut n = 0;
            for d in builtins(c)? {
                let sys = TermSystem::new(d);
                let ts = sys.enumerate_terms(p.term_height, p.term_max).terms;
                n += ts.len();
                order_laws(ts.len(), |i, j| sys.leq(&ts[i], &ts[j]), |i, j| ts[i] == ts[j])
                    .map_err(|i| format!("{}: law broken at {}", sys.dilator().name(), ts[i]))?;
            }
            Ok(format!("{n} terms"))
        },
    ));
    v.push(inv(
        "fixpoint",
        "degeneracy",
        format!("height <= {}", p.term_height),
        move |_| {
            let d = Arc::new(all_empty_dilator().or_fail()?);
            let sys = TermSystem::new(d.clone());
            let ts = sys.enumerate_terms(p.term_height, p.term_max).terms;
            let base = d.eval_order(&FinPoset::empty()).or_fail()?;
            ensure(ts.iter().all(FixTerm::is_leaf) && ts.len() == base.len(), || {
                format!("{} terms for {} elements of W(0)", ts.len(), base.len())
            })?;
            for (i, s) in ts.iter().enumerate() {
                for (j, t) in ts.iter().enumerate() {
                    let (a, b) = (base.index_of(&sys.as_elem(s).1), base.index_of(&sys.as_elem(t).1));
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(format!("{s} is not in W(0)"));
                    };
                    ensure(sys.leq(s, t) == base.le(a, b), || {
                        format!("terms {i} and {j} disagree with W(0)")
                    })?;
                }
            }
            Ok(format!("{} terms", ts.len()))
        },
    ));

    let tree_universe = TreeUniverse::new(2, Some(3));
    v.push(inv(
        "trees",
        "oracle-agreement",
        format!("vertices <= {}, m = 2, n = 3", p.tree_vertices),
        move |_| {
            let ts = enumerate_trees(tree_universe, p.tree_vertices);
            for s in &ts {
                for t in &ts {
                    let o = tree_leq_oracle(s, t).or_fail()?;
                    ensure(tree_leq(s, t) == o, || format!("{s} vs {t}: oracle says {o}"))?;
                }
            }
            Ok(format!("{} pairs", ts.len() * ts.len()))
        },
    ));
    v.push(inv(
        "trees",
        "order-laws",
        format!("vertices <= {}, m = 2, n = 3", p.tree_vertices.min(5)),
        move |_| {
            let ts = enumerate_trees(tree_universe, p.tree_vertices.min(5));
            order_laws(ts.len(), |i, j| tree_leq(&ts[i], &ts[j]), |i, j| ts[i] == ts[j])
                .map_err(|i| format!("law broken at {}", ts[i]))?;
            Ok(format!("{} trees", ts.len()))
        },
    ));
    v.push(inv(
        "trees",
        "gadget-laws",
        format!("i, j, k, l <= {}, m <= {}", p.gadget, p.gadget_labels),
        move |_| {
            for m in 1..=p.gadget_labels {
                for l in 0..m {
                    for l2 in 0..m {
                        let (a, b) = (label_gadget(m, l).or_fail()?, label_gadget(m, l2).or_fail()?);
                        ensure(tree_leq(&a, &b) == (l == l2), || {
                            format!("label gadgets {l}, {l2} for m = {m}")
                        })?;
                    }
                }
            }
            let r = 1..=p.gadget;
            for i in r.clone() {
                for j in r.clone() {
                    for k in r.clone() {
                        for l in r.clone() {
                            let le = tree_leq(&full_tree(k, i).or_fail()?, &full_tree(l, j).or_fail()?);
                            ensure(le == (i <= j && k <= l), || {
                                format!("full trees ({k}, {i}) vs ({l}, {j})")
                            })?;
                        }
                    }
                }
            }
            Ok("all pairs".into())
        },
    ));

    v.push(inv(
        "bridges",
        "tree-to-fix",
        format!("vertices <= {}, m = 1, n = 3", p.bridge_vertices + 1),
        move |c| {
            let sys = TermSystem::new(Arc::new(seq_dilator_with(3, c.higman).or_fail()?));
            let ts = enumerate_trees(TreeUniverse::new(1, Some(3)), p.bridge_vertices + 1);
            let img = ts
                .iter()
                .map(|t| tree_to_fixpoint(&sys, t))
                .collect::<ukruskal::Result<Vec<_>>>()
                .or_fail()?;
            let r = check_map(
                ts.len(),
                |i, j| tree_leq(&ts[i], &ts[j]),
                |i, j| sys.leq(&img[i], &img[j]),
                |i, j| img[i] == img[j],
            );
            map_verdict("tree-to-fix", &r, |i| ts[i].to_string())?;
            Ok(map_summary(&r))
        },
    ));
    v.push(inv(
        "bridges",
        "delabel",
        format!("vertices <= {}, m = 2, n = 3", p.bridge_vertices),
        move |_| {
            let ts = enumerate_trees(TreeUniverse::new(2, Some(3)), p.bridge_vertices);
            let img = ts
                .iter()
                .map(|t| delabel(2, 3, t))
                .collect::<ukruskal::Result<Vec<_>>>()
                .or_fail()?;
            let r = check_map(
                ts.len(),
                |i, j| tree_leq(&ts[i], &ts[j]),
                |i, j| tree_leq(&img[i], &img[j]),
                |i, j| img[i] == img[j],
            );
            map_verdict("delabel", &r, |i| ts[i].to_string())?;
            Ok(map_summary(&r))
        },
    ));
    v.push(inv(
        "bridges",
        "fix-to-tree",
        format!("height <= {}", p.term_height.min(3)),
        move |c| {
            let mut total = MapCheck::default();
            for n in [2, 3] {
                let sys = TermSystem::new(Arc::new(seq_dilator_with(n, c.higman).or_fail()?));
                let ts = sys.enumerate_terms(p.term_height.min(3), p.term_max.min(500)).terms;
                let img: Vec<LabeledTree> = ts
                    .iter()
                    .map(|t| fixpoint_to_tree(&sys, None, t))
                    .collect::<ukruskal::Result<_>>()
                    .or_fail()?;
                let r = check_map(
                    ts.len(),
                    |i, j| sys.leq(&ts[i], &ts[j]),
                    |i, j| tree_leq(&img[i], &img[j]),
                    |i, j| img[i] == img[j],
                );
                map_verdict("fix-to-tree", &r, |i| ts[i].to_string())?;
                total.pairs += r.pairs;
                total.preserved += r.preserved;
                total.related += r.related;
            }
            Ok(map_summary(&total))
        },
    ));
    v.push(inv(
        "bridges",
        "unary-to-seq",
        format!("height <= {}", p.term_height + 1),
        move |_| {
            let mut total = MapCheck::default();
            for d in unary_corpus()? {
                let sys = TermSystem::new(d);
                let alpha = UnaryAlphabet::new(sys.dilator()).or_fail()?;
                let ts = sys.enumerate_terms(p.term_height + 1, p.term_max).terms;
                let img = ts
                    .iter()
                    .map(|t| unary_to_seq(&sys, &alpha, t))
                    .collect::<ukruskal::Result<Vec<_>>>()
                    .or_fail()?;
                for (t, s) in ts.iter().zip(&img) {
                    ensure(s.len() == t.height() + 1, || {
                        format!("{t} maps to a sequence of length {}", s.len())
                    })?;
                }
                let r = check_map(
                    ts.len(),
                    |i, j| sys.leq(&ts[i], &ts[j]),
                    |i, j| higman_leq(&alpha.y, &img[i], &img[j]),
                    |i, j| img[i] == img[j],
                );
                map_verdict("unary-to-seq", &r, |i| ts[i].to_string())?;
                total.pairs += r.pairs;
                total.preserved += r.preserved;
                total.related += r.related;
            }
            Ok(map_summary(&total))
        },
    ));
    v.push(inv("bridges", "to-prime", "height <= 2".into(), move |c| {
        let mut total = MapCheck::default();
        for n in [2, 3] {
            let d = Arc::new(seq_dilator_with(n, c.higman).or_fail()?);
            let src = TermSystem::new(d.clone());
            let target = PrimeTarget::new(d).or_fail()?;
            let ts = src.enumerate_terms(2, p.term_max.min(500)).terms;
            let img = ts
                .iter()
                .map(|t| to_prime(&src, &target, t))
                .collect::<ukruskal::Result<Vec<_>>>()
                .or_fail()?;
            if let Some(i) = img.iter().position(|x| x.default_taken) {
                return Err(format!("fallback branch taken on {}", ts[i]));
            }
            let r = check_map(
                ts.len(),
                |i, j| src.leq(&ts[i], &ts[j]),
                |i, j| target.sys.leq(&img[i].term, &img[j].term),
                |i, j| img[i].term == img[j].term,
            );
            map_verdict("to-prime", &r, |i| ts[i].to_string())?;
            total.pairs += r.pairs;
            total.preserved += r.preserved;
            total.related += r.related;
        }
        Ok(map_summary(&total))
    }));
    v.push(inv(
        "bridges",
        "wz-iso",
        format!("height <= {}, |z| <= 2", p.term_height),
        move |_| {
            let mut n = 0;
            for z in [FinPoset::chain(1), FinPoset::chain(2), FinPoset::antichain(2)] {
                let sys = TermSystem::new(Arc::new(wz_dilator(&z).or_fail()?));
                let pairs = wz_iso(&sys, p.term_height).or_fail()?;
                let mut got: Vec<Vec<usize>> = pairs.iter().map(|(_, w)| w.clone()).collect();
                got.sort();
                let mut want = words(z.size(), p.term_height);
                want.sort();
                ensure(got == want, || {
                    format!("words over {} are not hit exactly once", z.to_json())
                })?;
                for (s, u) in &pairs {
                    ensure(&wz_word_to_term(&sys, u).or_fail()? == s, || {
                        format!("{s} does not round-trip")
                    })?;
                    for (t, w) in &pairs {
                        ensure(sys.leq(s, t) == higman_leq(&z, u, w), || format!("{s} vs {t}"))?;
                    }
                }
                n += pairs.len();
            }
            Ok(format!("{n} terms"))
        },
    ));
    v.push(inv("bridges", "prod-embed", format!("hosts <= {}", p.host), move |c| {
        let mut pairs = 0;
        for d in builtins(c)? {
            for x in hosts(p.host) {
                let ev = d.eval_order(&x).or_fail()?;
                let g: Vec<_> = ev.elems.iter().map(|e| d.prod_embed(&x, e)).collect();
                for i in 0..g.len() {
                    for j in 0..g.len() {
                        pairs += 1;
                        ensure(!ukruskal::dilator::prod_leq(&x, &g[i], &g[j]) || ev.le(i, j), || {
                            format!("{}: {} and {}", d.name(), d.show(&ev.elems[i]), d.show(&ev.elems[j]))
                        })?;
                    }
                }
            }
        }
        Ok(format!("{pairs} pairs"))
    }));

    v.push(inv(
        "falsify",
        "bad-search-sound",
        format!("hosts <= {}", p.host),
        move |c| {
            let mut found = 0;
            for d in builtins(c)? {
                for x in hosts(p.host) {
                    let ev = d.eval_order(&x).or_fail()?;
                    for len in 1..=ev.len().min(4) {
                        if let BadSearch::Found(s) =
                            bad_search(&ev.poset().or_fail()?, SearchBounds::new(len, ev.len()))
                        {
                            found += 1;
                            ensure(
                                s.len() == len
                                    && is_bad(&s, |i, j| d.leq(&x, &ev.elems[i], &ev.elems[j]).unwrap_or(true)),
                                || format!("{}: {s:?} is not bad over {}", d.name(), x.to_json()),
                            )?;
                        }
                    }
                }
            }
            Ok(format!("{found} witnesses re-checked"))
        },
    ));
    v.push(inv(
        "falsify",
        "antichain",
        format!("L <= {}", p.antichain_len),
        move |c| {
            let prod = product_dilator(2).or_fail()?;
            let seq = seq_dilator_with(3, c.higman).or_fail()?;
            for (d, tok) in [(&prod, "2p0.01"), (&prod, "2p8.01"), (&seq, "2p0.01")] {
                let t = d.token_index(tok).ok_or_else(|| format!("no token {tok}"))?;
                for len in 1..=p.antichain_len {
                    let r = token_antichain(d, t, len).or_fail()?;
                    for a in 0..len {
                        for b in 0..len {
                            let le = d.leq(&r.y, &r.elems[a], &r.elems[b]).or_fail()?;
                            ensure(le == (a == b), || {
                                format!("{} {tok}, L = {len}: entries {a}, {b}", d.name())
                            })?;
                        }
                    }
                }
            }
            Ok("3 tokens".into())
        },
    ));
    v.push(inv("falsify", "ladder", format!("K = {}", p.ladder_len), move |_| {
        for d in rigged()? {
            let m = is_monotone(&d).or_fail()?;
            let l = ladder_bad_sequence(&d, m.witness.as_ref(), p.ladder_len).or_fail()?;
            let le = |i: usize, j: usize| d.leq(&l.host, &l.elems[i], &l.elems[j]).unwrap_or(true);
            ensure(l.bad && is_bad(&(0..l.elems.len()).collect::<Vec<_>>(), le), || {
                format!("{}: ladder is not bad", d.name())
            })?;
        }
        Ok("3 fixtures".into())
    }));
    v.push(inv(
        "falsify",
        "descent",
        format!("steps <= {}", p.descent_steps),
        move |_| {
            let starts = ["<3,1>", "<1>", "<<2>,<1,1>>", "<<1>>", "<>"];
            for s in starts {
                let level = if s.starts_with("<<") { 3 } else { 2 };
                let from = OrdTerm::parse(level, s).or_fail()?;
                for steps in 0..=p.descent_steps {
                    let chain = descent_search(level, &from, steps).or_fail()?;
                    ensure(chain.len() <= steps, || {
                        format!("{s}: {} terms for budget {steps}", chain.len())
                    })?;
                    let mut prev = from.clone();
                    for t in &chain {
                        ensure(ord_cmp(t, &prev).or_fail()?.is_lt(), || {
                            format!("{s}: {t} is not below {prev}")
                        })?;
                        prev = t.clone();
                    }
                }
            }
            Ok(format!("{} starts", starts.len()))
        },
    ));
    v
}
