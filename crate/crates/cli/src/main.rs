use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ukruskal::bridges::{
    delabel, fixpoint_to_tree, to_prime, tree_to_fixpoint, unary_to_seq, wz_term_to_word, wz_word_to_term, PrimeTarget,
    UnaryAlphabet,
};
use ukruskal::dilator::{
    export_json, is_monotone_with, is_normal_with, prod_leq, validate_with, Bounds, CodedDilator, ProdCoord,
};
use ukruskal::falsify::{bad_search, descent_search, ladder_bad_sequence, token_antichain, BadSearch, SearchBounds};
use ukruskal::fixpoint::{Comparison, FixTerm, TermSystem};
use ukruskal::orders::{higman_leq, OrdTerm};
use ukruskal::trees::{tree_leq, tree_leq_oracle, LabeledTree, TreeUniverse};
use ukruskal_cli::profile::Profile;
use ukruskal_cli::{inputs, suite, CliError, Status};

/// Coded dilators, their term orders, labeled trees and the maps between them.
///
/// Exit status: 0 on success, 1 when a check fails or a precondition does
/// not hold, 2 on unreadable input. The environment variable
/// UKRUSKAL_POSET_CAP bounds every exhaustive enumeration over posets.
#[derive(Parser)]
#[command(name = "ukruskal", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the dilator axioms, normality, monotonicity and unarity.
    Validate {
        /// Built-in name (seq:3, prod:2, wz:2, prime:seq:2, fixture:<name>) or file.
        dilator: String,
        /// Largest poset visited by each check.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Terms of the initial fixed point.
    #[command(subcommand)]
    Term(TermCmd),
    /// Labeled trees under homeomorphic embedding.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Order-reflecting maps; --check compares two arguments and their images.
    #[command(subcommand)]
    Map(MapCmd),
    /// Bad sequences, antichains and descending chains.
    #[command(subcommand)]
    Falsify(FalsifyCmd),
    /// Run every invariant at the bounds of a size profile.
    Suite {
        #[arg(long, default_value = "default")]
        profile: Profile,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a dilator in the file format.
    Export { dilator: String },
}

#[derive(Subcommand)]
enum TermCmd {
    /// Print LT, GT, EQ or INC.
    Cmp {
        dilator: String,
        s: String,
        t: String,
        /// Largest poset visited by the normality check.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// List terms in rank order with their height and length.
    Enum {
        dilator: String,
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long, default_value_t = 1000)]
        max: usize,
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Print LT, GT, EQ or INC for trees with labels below m and fewer than n children.
    Cmp {
        m: usize,
        /// Branching bound, or inf.
        n: String,
        s: String,
        t: String,
        /// Use the brute-force embedding search.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Trees with fewer than n children into the fixed point of seq:n.
    TreeToFix {
        dilator: String,
        tree: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Trees with labels below m into unlabeled trees with fewer than n + 1 children.
    Delabel {
        m: usize,
        n: usize,
        tree: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Terms into trees labeled by trace tokens.
    FixToTree {
        dilator: String,
        term: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Terms of a unary dilator into sequences over W(0) + W(1).
    UnaryToSeq {
        dilator: String,
        term: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Terms of W into terms of the transformed dilator W'.
    ToPrime {
        dilator: String,
        term: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Terms of a wz dilator to words over z, or words such as 0,1 back to terms.
    WzIso {
        dilator: String,
        input: String,
        #[arg(long)]
        check: Option<String>,
    },
    /// Elements of W(X) into (Tr(W) + X)^(n+1).
    ProdEmbed {
        dilator: String,
        /// empty, chain:<k>, antichain:<k>, a poset object or a poset file.
        host: String,
        elem: String,
        #[arg(long)]
        check: Option<String>,
    },
}

#[derive(Subcommand)]
enum FalsifyCmd {
    /// Search W(X) for a bad sequence.
    Bad {
        dilator: String,
        host: String,
        #[arg(long)]
        length: usize,
        /// Use only the first WIDTH elements of W(X).
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Read a two-point token through a chain and its reverse.
    Antichain {
        dilator: String,
        token: String,
        #[arg(long)]
        length: usize,
    },
    /// Turn a monotonicity failure into a bad sequence.
    Ladder {
        dilator: String,
        #[arg(long, default_value_t = 5)]
        length: usize,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// A descending chain of ordinal terms.
    Descent {
        level: u8,
        from: String,
        #[arg(long)]
        steps: usize,
    },
}

type Out = Result<(String, Status), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.status as u8)
        }
    }
}

fn bounds(bound: Option<usize>) -> Bounds {
    bound.map(Bounds::uniform).unwrap_or_default()
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Validate { dilator, bound, format } => validate(&dilator, bounds(bound), format),
        Cmd::Term(t) => term(t),
        Cmd::Tree(TreeCmd::Cmp { m, n, s, t, oracle }) => {
            let u = TreeUniverse::new(m, inputs::branching(&n)?);
            let (s, t) = (LabeledTree::parse(&s)?, LabeledTree::parse(&t)?);
            u.check(&s)?;
            u.check(&t)?;
            let le = |a, b| {
                if oracle {
                    tree_leq_oracle(a, b)
                } else {
                    Ok(tree_leq(a, b))
                }
            };
            let c = Comparison::from_pair(le(&s, &t)?, le(&t, &s)?);
            Ok((format!("{c}\n"), Status::Ok))
        }
        Cmd::Map(m) => map(m),
        Cmd::Falsify(f) => falsify(f),
        Cmd::Suite { profile, format } => {
            let r = suite::run(&suite::Config::new(profile));
            let text = match format {
                Format::Text => r.text(),
                Format::Json => r.json() + "\n",
            };
            Ok((text, if r.passed { Status::Ok } else { Status::Failure }))
        }
        Cmd::Export { dilator } => {
            let d = inputs::dilator(&dilator)?;
            Ok((export_json(&d)? + "\n", Status::Ok))
        }
    }
}

#[derive(Serialize)]
struct ClauseJson<'a> {
    name: &'a str,
    axiom: bool,
    passed: bool,
    checked_up_to: usize,
    required: usize,
    witness: Option<&'a str>,
}

#[derive(Serialize)]
struct ValidationJson<'a> {
    dilator: &'a str,
    valid: bool,
    normal: bool,
    monotone: Option<bool>,
    monotone_witness: Option<String>,
    unary: bool,
    clauses: Vec<ClauseJson<'a>>,
}

fn validate(spec: &str, b: Bounds, format: Format) -> Out {
    let d = inputs::dilator(spec)?;
    let r = validate_with(&d, &b);
    // monotonicity reads the action, which an invalid dilator may lack
    let mono = if r.valid() { is_monotone_with(&d, &b).ok() } else { None };
    let status = if r.valid() { Status::Ok } else { Status::Failure };
    let witness = mono.as_ref().and_then(|m| m.witness.as_ref()).map(|w| w.show(&d));
    let text = match format {
        Format::Json => {
            let j = ValidationJson {
                dilator: d.name(),
                valid: r.valid(),
                normal: r.normal(),
                monotone: mono.as_ref().map(|m| m.monotone),
                monotone_witness: witness,
                unary: d.is_unary(),
                clauses: r
                    .clauses
                    .iter()
                    .map(|c| ClauseJson {
                        name: c.name,
                        axiom: c.axiom,
                        passed: c.passed,
                        checked_up_to: c.checked_up_to,
                        required: c.required,
                        witness: c.witness.as_deref(),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&j).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut out = format!("dilator {}\n{r}", d.name());
            match &mono {
                Some(m) => {
                    write!(
                        out,
                        "{:<22} {}  size {}/{}",
                        "monotonicity",
                        if m.monotone { "pass" } else { "FAIL" },
                        m.checked_up_to,
                        m.required
                    )
                    .unwrap();
                    if let Some(w) = &witness {
                        write!(out, "  {w}").unwrap();
                    }
                    out.push('\n');
                }
                None => out.push_str("monotonicity           skipped: the dilator is invalid\n"),
            }
            writeln!(out, "valid = {}", r.valid()).unwrap();
            writeln!(out, "normal = {}", r.normal()).unwrap();
            match &mono {
                Some(m) => writeln!(out, "monotone = {}", m.monotone).unwrap(),
                None => writeln!(out, "monotone = unknown").unwrap(),
            }
            writeln!(out, "unary = {}", d.is_unary()).unwrap();
            out
        }
    };
    Ok((text, status))
}

/// A term system over `d`, refused unless `d` is normal: otherwise the term
/// relation need not be antisymmetric.
fn normal_system(d: Arc<CodedDilator>, bound: Option<usize>) -> Result<TermSystem, CliError> {
    let n = is_normal_with(&d, &bounds(bound));
    if !n.normal {
        return Err(CliError::failure(format!(
            "{} is not normal: {}",
            d.name(),
            n.witness.unwrap_or_default()
        )));
    }
    Ok(TermSystem::new(d))
}

fn term(cmd: TermCmd) -> Out {
    match cmd {
        TermCmd::Cmp { dilator, s, t, bound } => {
            let sys = normal_system(inputs::dilator(&dilator)?, bound)?;
            let (s, t) = (sys.parse(&s)?, sys.parse(&t)?);
            Ok((format!("{}\n", sys.compare(&s, &t)), Status::Ok))
        }
        TermCmd::Enum {
            dilator,
            height,
            max,
            bound,
        } => {
            let sys = normal_system(inputs::dilator(&dilator)?, bound)?;
            let e = sys.enumerate_terms(height, max);
            let mut out = String::from("height  length  term\n");
            for t in &e.terms {
                writeln!(out, "{:<7} {:<7} {t}", t.height(), t.length()).unwrap();
            }
            let note = if e.truncated { ", truncated" } else { "" };
            writeln!(out, "{} terms{note}", e.terms.len()).unwrap();
            Ok((out, Status::Ok))
        }
    }
}

/// Prints the image of `a`, and with `b` also the image of `b` and whether
/// the comparison of the images is reflected by the arguments.
fn checked<A, B: std::fmt::Display>(
    a: A,
    b: Option<A>,
    image: impl Fn(&A) -> Result<B, CliError>,
    le_in: impl Fn(&A, &A) -> bool,
    le_out: impl Fn(&B, &B) -> bool,
) -> Out {
    let ia = image(&a)?;
    let mut out = format!("{ia}\n");
    let Some(b) = b else { return Ok((out, Status::Ok)) };
    let ib = image(&b)?;
    writeln!(out, "{ib}").unwrap();
    let cin = Comparison::from_pair(le_in(&a, &b), le_in(&b, &a));
    let cout = Comparison::from_pair(le_out(&ia, &ib), le_out(&ib, &ia));
    let reflects = (!le_out(&ia, &ib) || le_in(&a, &b)) && (!le_out(&ib, &ia) || le_in(&b, &a));
    writeln!(out, "arguments {cin}, images {cout}, reflects = {reflects}").unwrap();
    Ok((out, if reflects { Status::Ok } else { Status::Failure }))
}

/// Shows a sequence as `<a, b, ...>`.
struct Seq(Vec<String>);

impl std::fmt::Display for Seq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{}>", self.0.join(", "))
    }
}

fn map(cmd: MapCmd) -> Out {
    match cmd {
        MapCmd::TreeToFix { dilator, tree, check } => {
            let sys = TermSystem::new(inputs::dilator(&dilator)?);
            let a = LabeledTree::parse(&tree)?;
            let b = check.map(|s| LabeledTree::parse(&s)).transpose()?;
            checked(a, b, |t| Ok(tree_to_fixpoint(&sys, t)?), tree_leq, |s, t| sys.leq(s, t))
        }
        MapCmd::Delabel { m, n, tree, check } => {
            let a = LabeledTree::parse(&tree)?;
            let b = check.map(|s| LabeledTree::parse(&s)).transpose()?;
            checked(a, b, |t| Ok(delabel(m, n, t)?), tree_leq, tree_leq)
        }
        MapCmd::FixToTree { dilator, term, check } => {
            let sys = normal_system(inputs::dilator(&dilator)?, None)?;
            let a = sys.parse(&term)?;
            let b = check.map(|s| sys.parse(&s)).transpose()?;
            checked(
                a,
                b,
                |t| Ok(fixpoint_to_tree(&sys, None, t)?),
                |s, t| sys.leq(s, t),
                tree_leq,
            )
        }
        MapCmd::UnaryToSeq { dilator, term, check } => {
            let sys = normal_system(inputs::dilator(&dilator)?, None)?;
            let alpha = UnaryAlphabet::new(sys.dilator())?;
            let a = sys.parse(&term)?;
            let b = check.map(|s| sys.parse(&s)).transpose()?;
            let d = sys.dilator().clone();
            let image = |t: &FixTerm| -> Result<Labeled, CliError> {
                let s = unary_to_seq(&sys, &alpha, t)?;
                let shown = s.iter().map(|&i| alpha.show(&d, i)).collect();
                Ok(Labeled(s, Seq(shown)))
            };
            checked(
                a,
                b,
                image,
                |s, t| sys.leq(s, t),
                |s, t| higman_leq(&alpha.y, &s.0, &t.0),
            )
        }
        MapCmd::ToPrime { dilator, term, check } => {
            let d = inputs::dilator(&dilator)?;
            let src = normal_system(d.clone(), None)?;
            let target = PrimeTarget::new(d)?;
            let a = src.parse(&term)?;
            let b = check.map(|s| src.parse(&s)).transpose()?;
            let image = |t: &FixTerm| -> Result<FixTerm, CliError> {
                let p = to_prime(&src, &target, t)?;
                if p.default_taken {
                    return Err(CliError::failure(format!(
                        "the image of {t} fell back to the default value"
                    )));
                }
                Ok(p.term)
            };
            checked(a, b, image, |s, t| src.leq(s, t), |s, t| target.sys.leq(s, t))
        }
        MapCmd::WzIso { dilator, input, check } => {
            let sys = TermSystem::new(inputs::dilator(&dilator)?);
            let word_leq = |u: &Vec<usize>, v: &Vec<usize>| ukruskal::bridges::wz_word_leq(&sys, u, v);
            if input.trim_start().starts_with('(') {
                let a = sys.parse(&input)?;
                let b = check.map(|s| sys.parse(&s)).transpose()?;
                let image = |t: &FixTerm| -> Result<Labeled, CliError> {
                    let w = wz_term_to_word(&sys, t)?;
                    let shown = w.iter().map(ToString::to_string).collect();
                    Ok(Labeled(w, Seq(shown)))
                };
                checked(a, b, image, |s, t| sys.leq(s, t), |s, t| word_leq(&s.0, &t.0))
            } else {
                let a = inputs::word(&input)?;
                let b = check.map(|s| inputs::word(&s)).transpose()?;
                checked(a, b, |w| Ok(wz_word_to_term(&sys, w)?), word_leq, |s, t| sys.leq(s, t))
            }
        }
        MapCmd::ProdEmbed {
            dilator,
            host,
            elem,
            check,
        } => {
            let d = inputs::dilator(&dilator)?;
            let x = inputs::host(&host)?;
            let a = d.parse_elem(&x, &elem)?;
            let b = check.map(|s| d.parse_elem(&x, &s)).transpose()?;
            let image = |e: &_| -> Result<Coords, CliError> {
                let g = d.prod_embed(&x, e);
                let shown = g
                    .iter()
                    .map(|c| match c {
                        ProdCoord::Point(p) => p.to_string(),
                        ProdCoord::Trace(t) => d.token_id(*t).to_string(),
                    })
                    .collect();
                Ok(Coords(g, Seq(shown)))
            };
            let le_in = |s: &_, t: &_| d.leq(&x, s, t).unwrap_or(false);
            checked(a, b, image, le_in, |s, t| prod_leq(&x, &s.0, &t.0))
        }
    }
}

/// A sequence of indices with its printed form.
struct Labeled(Vec<usize>, Seq);

impl std::fmt::Display for Labeled {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.1.fmt(f)
    }
}

struct Coords(Vec<ProdCoord>, Seq);

impl std::fmt::Display for Coords {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.1.fmt(f)
    }
}

fn falsify(cmd: FalsifyCmd) -> Out {
    match cmd {
        FalsifyCmd::Bad {
            dilator,
            host,
            length,
            width,
            budget,
        } => {
            let d = inputs::dilator(&dilator)?;
            let x = inputs::host(&host)?;
            let ev = d.eval_order(&x)?;
            let b = SearchBounds {
                length,
                width: width.unwrap_or(ev.len()),
                budget,
            };
            let out = match bad_search(&ev.poset()?, b) {
                BadSearch::Found(s) => {
                    let shown: Vec<String> = s.iter().map(|&i| d.show(&ev.elems[i])).collect();
                    format!("found {}\n", Seq(shown))
                }
                BadSearch::NoneFound => format!(
                    "none found among the first {} of {} elements\n",
                    b.width.min(ev.len()),
                    ev.len()
                ),
                BadSearch::Inconclusive { visited } => format!("inconclusive after {visited} nodes\n"),
            };
            Ok((out, Status::Ok))
        }
        FalsifyCmd::Antichain { dilator, token, length } => {
            let d = inputs::dilator(&dilator)?;
            let t = d
                .token_index(&token)
                .ok_or_else(|| CliError::input(format!("unknown token {token:?}")))?;
            let r = token_antichain(&d, t, length)?;
            let mut out = format!("host {}\n", r.y.to_json());
            for e in &r.elems {
                writeln!(out, "{}", d.show(e)).unwrap();
            }
            match r.comparable {
                None => {
                    writeln!(out, "antichain = true").unwrap();
                    Ok((out, Status::Ok))
                }
                Some((a, b)) => {
                    writeln!(out, "antichain = false: entry {a} <= entry {b}").unwrap();
                    Ok((out, Status::Failure))
                }
            }
        }
        FalsifyCmd::Ladder { dilator, length, bound } => {
            let d = inputs::dilator(&dilator)?;
            let m = is_monotone_with(&d, &bounds(bound))?;
            let Some(w) = &m.witness else {
                return Err(CliError::failure(format!(
                    "{} is monotone on posets up to size {}; there is no witness",
                    d.name(),
                    m.checked_up_to
                )));
            };
            let l = ladder_bad_sequence(&d, Some(w), length)?;
            let mut out = format!(
                "witness {}\nlifted = {}\nhost {}\n",
                w.show(&d),
                l.lifted,
                l.host.to_json()
            );
            for e in &l.elems {
                writeln!(out, "{}", d.show(e)).unwrap();
            }
            writeln!(out, "bad = {}", l.bad).unwrap();
            Ok((out, if l.bad { Status::Ok } else { Status::Failure }))
        }
        FalsifyCmd::Descent { level, from, steps } => {
            let from = OrdTerm::parse(level, &from)?;
            let chain = descent_search(level, &from, steps)?;
            let mut out = format!("{from}\n");
            for t in &chain {
                writeln!(out, "{t}").unwrap();
            }
            writeln!(out, "{} steps", chain.len()).unwrap();
            Ok((out, Status::Ok))
        }
    }
}
