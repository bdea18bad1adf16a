//! Generalized subword order on `P*`.
//!
//! `u ≤ w` when some subsequence of `w` dominates `u` letter by letter. Intervals
//! are enumerated from the restrictions of the top word; covers are recovered
//! by transitive reduction, so the single definition of `≤` drives everything.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::poset::{HatPoset, Poset};
use crate::words::{defect, normal_embeddings, Word};

/// `u ≤ w` in `P*`. Greedy left-to-right matching is exact for subsequence
/// domination.
pub fn subword_leq(u: &Word, w: &Word, p: &Poset) -> bool {
    let mut it = w.iter();
    u.iter().all(|&x| it.any(|&y| p.leq(x, y)))
}

fn not_comparable(u: &Word, w: &Word, p: &Poset) -> Error {
    Error::NotComparable {
        u: u.display(p).to_string(),
        w: w.display(p).to_string(),
    }
}

/// Every word `v ≤ w`: choose positions of `w` to keep, lower each kept letter
/// to anything below it, deduplicate.
pub fn down_set(w: &Word, p: &Poset) -> Vec<Word> {
    let below: Vec<_> = p.elements().map(|x| p.down_set(x)).collect();
    let mut seen = HashSet::new();
    let mut buf = Vec::with_capacity(w.len());
    fn go(
        i: usize,
        w: &Word,
        below: &[Vec<crate::poset::Elem>],
        buf: &mut Vec<crate::poset::Elem>,
        seen: &mut HashSet<Word>,
    ) {
        if i == w.len() {
            if !seen.contains(buf.as_slice()) {
                seen.insert(Word(buf.clone()));
            }
            return;
        }
        go(i + 1, w, below, buf, seen);
        for &y in &below[w[i].index()] {
            buf.push(y);
            go(i + 1, w, below, buf, seen);
            buf.pop();
        }
    }
    go(0, w, &below, &mut buf, &mut seen);
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort_by(|a, b| a.rank(p).cmp(&b.rank(p)).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn meets(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }
}

/// The closed interval `[bottom, top]` of `P*` with its Hasse diagram.
#[derive(Debug, Clone)]
pub struct Interval {
    pub bottom: Word,
    pub top: Word,
    elements: Vec<Word>,
    index: HashMap<Word, usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    lower_covers: Vec<Vec<usize>>,
}

impl Interval {
    /// Elements sorted by rank, bottom first and top last.
    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &Word) -> bool {
        self.index.contains_key(v)
    }

    pub fn position(&self, v: &Word) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `elements[i] ≤ elements[j]`.
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Cover pairs `(lower, upper)` as element indices.
    pub fn cover_pairs(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn bottom_idx(&self) -> usize {
        0
    }

    pub fn top_idx(&self) -> usize {
        self.elements.len() - 1
    }

    /// `μ(bottom, v)` for every element, by the defining recurrence.
    pub fn mobius_from_bottom(&self) -> Vec<i64> {
        let n = self.len();
        let mut mu = vec![0i64; n];
        for j in 0..n {
            if j == 0 {
                mu[j] = 1;
                continue;
            }
            let s: i64 = (0..j).filter(|&i| self.leq[i][j]).map(|i| mu[i]).sum();
            mu[j] = -s;
        }
        mu
    }

    /// Hasse diagram in Graphviz syntax, top word at rank 0.
    pub fn to_dot(&self, p: &Poset) -> String {
        let name = |i: usize| self.elements[i].display(p).to_string();
        let top_rank = self.top.rank(p);
        let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.elements.iter().enumerate() {
            levels.entry(top_rank - v.rank(p)).or_default().push(i);
        }
        let mut out =
            String::from("digraph interval {\n  rankdir=TB;\n  node [shape=plaintext];\n");
        for nodes in levels.values() {
            out.push_str("  { rank=same;");
            for &i in nodes {
                let _ = write!(out, " \"{}\";", name(i));
            }
            out.push_str(" }\n");
        }
        let mut edges: Vec<(usize, usize)> = self.covers.clone();
        edges.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        for (lo, hi) in edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [dir=none];", name(hi), name(lo));
        }
        out.push_str("}\n");
        out
    }
}

/// Builds `[u, w]`.
pub fn interval(u: &Word, w: &Word, p: &Poset) -> Result<Interval> {
    if !subword_leq(u, w, p) {
        return Err(not_comparable(u, w, p));
    }
    // down_set is sorted by rank, so u comes first and w last.
    let elements: Vec<Word> = down_set(w, p)
        .into_iter()
        .filter(|v| subword_leq(u, v, p))
        .collect();
    let n = elements.len();
    let index: HashMap<Word, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let mut leq = vec![vec![false; n]; n];
    let mut up = vec![Bits::new(n); n];
    let mut down = vec![Bits::new(n); n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            if elements[i].rank(p) < elements[j].rank(p)
                && subword_leq(&elements[i], &elements[j], p)
            {
                leq[i][j] = true;
                up[i].set(j);
                down[j].set(i);
            }
        }
    }
    let mut covers = Vec::new();
    let mut lower_covers = vec![Vec::new(); n];
    for (i, above) in up.iter().enumerate() {
        for j in i + 1..n {
            if above.get(j) && !above.meets(&down[j]) {
                covers.push((i, j));
                lower_covers[j].push(i);
            }
        }
    }
    Ok(Interval {
        bottom: u.clone(),
        top: w.clone(),
        elements,
        index,
        leq,
        covers,
        lower_covers,
    })
}

/// A maximal chain `top = v₀ ⋗ v₁ ⋗ … ⋗ v_d = bottom`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaximalChain {
    pub vertices: Vec<Word>,
}

impl MaximalChain {
    /// Number of cover steps `d`.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Every maximal chain of the interval, each once, by depth-first search
/// down the cover graph.
pub fn maximal_chains(iv: &Interval) -> Vec<MaximalChain> {
    let mut out = Vec::new();
    let mut path = vec![iv.top_idx()];
    fn go(iv: &Interval, path: &mut Vec<usize>, out: &mut Vec<MaximalChain>) {
        let last = *path.last().expect("nonempty path");
        if last == iv.bottom_idx() {
            out.push(MaximalChain {
                vertices: path.iter().map(|&i| iv.elements[i].clone()).collect(),
            });
            return;
        }
        for &lo in &iv.lower_covers[last] {
            path.push(lo);
            go(iv, path, out);
            path.pop();
        }
    }
    go(iv, &mut path, &mut out);
    out
}

/// `μ(u, w)` by the recurrence `μ(u,u) = 1`, `μ(u,w) = -Σ_{u≤v<w} μ(u,v)`.
/// Valid for every ground poset.
pub fn mobius_recurrence(u: &Word, w: &Word, p: &Poset) -> Result<i64> {
    let iv = interval(u, w, p)?;
    Ok(*iv
        .mobius_from_bottom()
        .last()
        .expect("interval contains its top"))
}

/// `μ(v, w)` for every `v ≤ w`, by the dual recurrence
/// `μ(v,w) = -Σ_{v<x≤w} μ(x,w)`. One pass serves all lower endpoints at once.
pub fn mobius_from_top(w: &Word, p: &Poset) -> HashMap<Word, i64> {
    let mut below = down_set(w, p);
    below.reverse();
    let mut acc: HashMap<Word, i64> = below.iter().map(|v| (v.clone(), 0)).collect();
    let mut mu = HashMap::with_capacity(below.len());
    for x in &below {
        let m = if x == w { 1 } else { -acc[x] };
        mu.insert(x.clone(), m);
        if m != 0 {
            for y in down_set(x, p) {
                if &y != x {
                    *acc.get_mut(&y).expect("down-set of a member stays inside") += m;
                }
            }
        }
    }
    mu
}

/// `μ(u, w) = Σ (-1)^{d(η)}` over the normal embeddings `η` of `u` into `w`.
/// Defined for rooted forests only.
pub fn mobius_formula(u: &Word, w: &Word, h: &HatPoset) -> Result<i64> {
    h.require_forest()?;
    if !subword_leq(u, w, h) {
        return Err(not_comparable(u, w, h));
    }
    let mut mu = 0i64;
    for eta in normal_embeddings(u, w, h)? {
        mu += if defect(&eta, h)? % 2 == 0 { 1 } else { -1 };
    }
    Ok(mu)
}

/// Closed form over an antichain: `(-1)^{|w|-|u|}` times the number of normal
/// embeddings.
pub fn mobius_antichain(u: &Word, w: &Word, p: &Poset) -> Result<i64> {
    if !p.is_antichain() {
        return Err(Error::NotAntichain);
    }
    if !subword_leq(u, w, p) {
        return Err(not_comparable(u, w, p));
    }
    let h = HatPoset::new(p.clone());
    let count = normal_embeddings(u, w, &h)?.len() as i64;
    let sign = if (w.len() - u.len()).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Ok(sign * count)
}
