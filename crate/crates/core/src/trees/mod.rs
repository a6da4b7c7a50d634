//! Finite ordered trees with labels below `m` and branching below `n`, and
//! the homeomorphic embedding between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits::TREE_ORACLE_VERTICES;
use crate::orders::higman_leq_by;

/// `label * (children...)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    label: usize,
    children: Vec<LabeledTree>,
}

/// The universe of trees with labels `< m` and fewer than `n` children at
/// every vertex; `n = None` leaves branching unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeUniverse {
    pub m: usize,
    pub n: Option<usize>,
}

impl TreeUniverse {
    pub fn new(m: usize, n: Option<usize>) -> Self {
        TreeUniverse { m, n }
    }

    pub fn contains(&self, t: &LabeledTree) -> bool {
        t.label < self.m && self.n.is_none_or(|n| t.children.len() < n) && t.children.iter().all(|c| self.contains(c))
    }

    pub fn check(&self, t: &LabeledTree) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            let n = self.n.map_or("unbounded".to_string(), |n| n.to_string());
            Err(Error::Precondition(format!(
                "{t} is not a tree with labels < {} and branching < {n}",
                self.m
            )))
        }
    }
}

impl LabeledTree {
    pub fn new(label: usize, children: Vec<LabeledTree>) -> Self {
        LabeledTree { label, children }
    }

    pub fn leaf(label: usize) -> Self {
        LabeledTree::new(label, Vec::new())
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn children(&self) -> &[LabeledTree] {
        &self.children
    }

    pub fn vertices(&self) -> usize {
        1 + self.children.iter().map(LabeledTree::vertices).sum::<usize>()
    }

    /// Largest label plus one.
    pub fn label_bound(&self) -> usize {
        self.children
            .iter()
            .map(LabeledTree::label_bound)
            .fold(self.label + 1, usize::max)
    }

    /// Largest number of children at a vertex.
    pub fn max_branching(&self) -> usize {
        self.children
            .iter()
            .map(LabeledTree::max_branching)
            .fold(self.children.len(), usize::max)
    }

    /// Parses `label*(child child ...)`.
    pub fn parse(text: &str) -> Result<LabeledTree> {
        let s = text.as_bytes();
        let mut i = 0;
        let t = parse_tree(s, &mut i)?;
        skip_ws(s, &mut i);
        if i != s.len() {
            return Err(Error::Parse(format!("trailing input at byte {i}")));
        }
        Ok(t)
    }
}

fn skip_ws(s: &[u8], i: &mut usize) {
    while *i < s.len() && s[*i].is_ascii_whitespace() {
        *i += 1;
    }
}

fn parse_tree(s: &[u8], i: &mut usize) -> Result<LabeledTree> {
    skip_ws(s, i);
    let start = *i;
    while *i < s.len() && s[*i].is_ascii_digit() {
        *i += 1;
    }
    let label = std::str::from_utf8(&s[start..*i])
        .ok()
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected a label at byte {start}")))?;
    for c in *b"*(" {
        skip_ws(s, i);
        if s.get(*i) != Some(&c) {
            return Err(Error::Parse(format!("expected {:?} at byte {}", c as char, *i)));
        }
        *i += 1;
    }
    let mut children = Vec::new();
    loop {
        skip_ws(s, i);
        match s.get(*i) {
            Some(b')') => {
                *i += 1;
                return Ok(LabeledTree::new(label, children));
            }
            Some(_) => children.push(parse_tree(s, i)?),
            None => return Err(Error::Parse("unterminated tree".into())),
        }
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*(", self.label)?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Vertices in preorder; `kids[v]` lists the children of `v`.
struct Flat {
    label: Vec<usize>,
    kids: Vec<Vec<usize>>,
}

impl Flat {
    fn new(t: &LabeledTree) -> Flat {
        fn go(t: &LabeledTree, f: &mut Flat) -> usize {
            let v = f.label.len();
            f.label.push(t.label);
            f.kids.push(Vec::new());
            for c in &t.children {
                let w = go(c, f);
                f.kids[v].push(w);
            }
            v
        }
        let mut f = Flat {
            label: Vec::new(),
            kids: Vec::new(),
        };
        go(t, &mut f);
        f
    }
}

/// `l*τ ⊴ l'*τ'` iff `l = l'` and `τ ⊴* τ'`, or `l*τ ⊴ t` for an entry `t`
/// of `τ'`; `⊴*` is the Higman lift of `⊴`.
pub fn tree_leq(s: &LabeledTree, t: &LabeledTree) -> bool {
    let (a, b) = (Flat::new(s), Flat::new(t));
    let (na, nb) = (a.label.len(), b.label.len());
    // children follow their parent in preorder, so reverse preorder is bottom-up
    let mut le = vec![false; na * nb];
    for u in (0..na).rev() {
        for v in (0..nb).rev() {
            let root = a.label[u] == b.label[v] && higman_leq_by(&a.kids[u], &b.kids[v], |&x, &y| le[x * nb + y]);
            let below = root || b.kids[v].iter().any(|&c| le[u * nb + c]);
            le[u * nb + v] = below;
        }
    }
    le[0]
}

/// Ancestry, meets and left-to-right position of the vertices of one tree.
struct Layout {
    label: Vec<usize>,
    /// `anc[u][v]`: `u` is a proper ancestor of `v`.
    anc: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
}

impl Layout {
    fn new(t: &LabeledTree) -> Layout {
        fn go(t: &LabeledTree, path: &mut Vec<usize>, label: &mut Vec<usize>, paths: &mut Vec<Vec<usize>>) {
            let v = label.len();
            label.push(t.label);
            path.push(v);
            paths.push(path.clone());
            for c in &t.children {
                go(c, path, label, paths);
            }
            path.pop();
        }
        let (mut label, mut paths) = (Vec::new(), Vec::new());
        go(t, &mut Vec::new(), &mut label, &mut paths);
        let k = label.len();
        let anc = (0..k)
            .map(|u| (0..k).map(|v| u != v && paths[v].contains(&u)).collect())
            .collect();
        let meet = (0..k)
            .map(|u| {
                (0..k)
                    .map(|v| {
                        let common = paths[u].iter().zip(&paths[v]).take_while(|(x, y)| x == y).count();
                        paths[u][common - 1]
                    })
                    .collect()
            })
            .collect();
        Layout { label, anc, meet }
    }

    /// Preorder numbering puts `u` left of `v` when neither is an ancestor
    /// of the other and `u < v`.
    fn left_of(&self, u: usize, v: usize) -> bool {
        u < v && !self.anc[u][v]
    }
}

/// Brute-force embedding test: some injective vertex map preserving labels,
/// ancestry in both directions, meets, and left-to-right order.
pub fn tree_leq_oracle(s: &LabeledTree, t: &LabeledTree) -> Result<bool> {
    for x in [s, t] {
        let k = x.vertices();
        if k > TREE_ORACLE_VERTICES {
            return Err(Error::resource("tree embedding search", k, TREE_ORACLE_VERTICES));
        }
    }
    let (a, b) = (Layout::new(s), Layout::new(t));
    let mut img = Vec::with_capacity(a.label.len());
    Ok(extend(&a, &b, &mut img))
}

fn extend(a: &Layout, b: &Layout, img: &mut Vec<usize>) -> bool {
    let u = img.len();
    if u == a.label.len() {
        return true;
    }
    for x in 0..b.label.len() {
        if b.label[x] != a.label[u] || img.contains(&x) {
            continue;
        }
        let fits = (0..u).all(|w| {
            let y = img[w];
            a.anc[w][u] == b.anc[y][x]
                && a.anc[u][w] == b.anc[x][y]
                && img[a.meet[w][u]] == b.meet[y][x]
                && a.left_of(w, u) == b.left_of(y, x)
        });
        if fits {
            img.push(x);
            if extend(a, b, img) {
                return true;
            }
            img.pop();
        }
    }
    false
}

/// `t^0_k = 0*()` and `t^{j+1}_k = 0*(t^j_k ... t^j_k)` with `k` children.
pub fn full_tree(k: usize, j: usize) -> Result<LabeledTree> {
    if k == 0 {
        return Err(Error::Precondition("full_tree needs k >= 1".into()));
    }
    let mut t = LabeledTree::leaf(0);
    for _ in 0..j {
        t = LabeledTree::new(0, vec![t; k]);
    }
    Ok(t)
}

/// `t(l) = t^{m-l}_{l+1}`.
pub fn label_gadget(m: usize, l: usize) -> Result<LabeledTree> {
    if l >= m {
        return Err(Error::Precondition(format!(
            "label_gadget needs l < m, got l = {l}, m = {m}"
        )));
    }
    full_tree(l + 1, m - l)
}

/// Every tree of the universe with at most `max_vertices` vertices, ordered
/// by vertex count and then structurally.
pub fn enumerate_trees(u: TreeUniverse, max_vertices: usize) -> Vec<LabeledTree> {
    // by_size[k]: trees with exactly k vertices
    let mut by_size: Vec<Vec<LabeledTree>> = vec![Vec::new(); max_vertices + 1];
    // forests[k]: sequences of trees with k vertices in total, by length
    let mut forests: Vec<Vec<Vec<LabeledTree>>> = vec![Vec::new(); max_vertices + 1];
    if max_vertices == 0 {
        return Vec::new();
    }
    forests[0].push(Vec::new());
    for k in 1..=max_vertices {
        let mut trees = Vec::new();
        for kids in &forests[k - 1] {
            if u.n.is_some_and(|n| kids.len() >= n) {
                continue;
            }
            for l in 0..u.m {
                trees.push(LabeledTree::new(l, kids.clone()));
            }
        }
        trees.sort();
        by_size[k] = trees;
        let mut fs = Vec::new();
        for first in 1..=k {
            for t in &by_size[first] {
                for rest in &forests[k - first] {
                    let mut f = Vec::with_capacity(rest.len() + 1);
                    f.push(t.clone());
                    f.extend(rest.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests[k] = fs;
    }
    by_size.into_iter().flatten().collect()
}
