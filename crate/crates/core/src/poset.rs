//! Finite ground posets and the adjoined bottom `0̂`.
//!
//! A [`Poset`] is built from its Hasse diagram. The order relation is the
//! reflexive-transitive closure of the cover pairs and is cached as a dense
//! matrix; ground posets here have a handful of elements.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name reserved for the adjoined bottom element.
pub const BOTTOM_NAME: &str = "0";

/// Index of an element of a [`Poset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u16);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A position of an expansion: a ground element, or `None` for `0̂`.
pub type Slot = Option<Elem>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetKind {
    Chain,
    Antichain,
    Lambda,
    Custom,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    covers: Vec<(Elem, Elem)>,
    leq: Vec<Vec<bool>>,
    lower_covers: Vec<Vec<Elem>>,
    heights: Vec<usize>,
    kind: PosetKind,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &self.cover_names())
            .finish()
    }
}

/// On-disk poset description: `{"elements": [...], "covers": [[lower, upper], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl Poset {
    /// Builds a poset from its elements and Hasse diagram, given as
    /// `(lower, upper)` pairs.
    ///
    /// Cycles and cover pairs implied by transitivity are rejected rather than
    /// silently reduced.
    pub fn build<S: AsRef<str>>(elements: &[S], cover_pairs: &[(S, S)]) -> Result<Poset> {
        let mut names = Vec::with_capacity(elements.len());
        let mut index = HashMap::new();
        for name in elements {
            let name = name.as_ref();
            if name == BOTTOM_NAME {
                return Err(Error::ReservedName(name.to_string()));
            }
            if name.is_empty() || name.contains(',') || name.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid element name `{name}`")));
            }
            if index
                .insert(name.to_string(), Elem(names.len() as u16))
                .is_some()
            {
                return Err(Error::DuplicateElement(name.to_string()));
            }
            names.push(name.to_string());
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownElement(name.to_string()))
        };
        let mut covers = Vec::with_capacity(cover_pairs.len());
        for (lo, hi) in cover_pairs {
            let pair = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            if pair.0 == pair.1 {
                return Err(Error::CycleDetected(names[pair.0.index()].clone()));
            }
            if covers.contains(&pair) {
                return Err(Error::RedundantCover {
                    lower: names[pair.0.index()].clone(),
                    upper: names[pair.1.index()].clone(),
                });
            }
            covers.push(pair);
        }
        Self::from_parts(names, index, covers, PosetKind::Custom)
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, Elem>,
        covers: Vec<(Elem, Elem)>,
        kind: PosetKind,
    ) -> Result<Poset> {
        let n = names.len();
        let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut lower_covers: Vec<Vec<Elem>> = vec![Vec::new(); n];
        for &(lo, hi) in &covers {
            upper[lo.index()].push(hi.index());
            lower_covers[hi.index()].push(lo);
        }

        // strict[x][y]: y reachable from x by a nonempty upward path.
        let mut strict = vec![vec![false; n]; n];
        for x in 0..n {
            let mut stack: Vec<usize> = upper[x].clone();
            while let Some(y) = stack.pop() {
                if !strict[x][y] {
                    strict[x][y] = true;
                    stack.extend(upper[y].iter().copied());
                }
            }
            if strict[x][x] {
                return Err(Error::CycleDetected(names[x].clone()));
            }
        }

        // A cover (lo, hi) is redundant when hi is reachable from another
        // upper cover of lo.
        for &(lo, hi) in &covers {
            let implied = upper[lo.index()]
                .iter()
                .any(|&z| z != hi.index() && strict[z][hi.index()]);
            if implied {
                return Err(Error::RedundantCover {
                    lower: names[lo.index()].clone(),
                    upper: names[hi.index()].clone(),
                });
            }
        }

        let mut leq = strict;
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }

        let mut heights = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&y| leq[y][x]).count());
        for &x in &order {
            heights[x] = lower_covers[x]
                .iter()
                .map(|l| heights[l.index()] + 1)
                .max()
                .unwrap_or(0);
        }

        Ok(Poset {
            names,
            index,
            covers,
            leq,
            lower_covers,
            heights,
            kind,
        })
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Result<Poset> {
        if n == 0 {
            return Err(Error::EmptyChain);
        }
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Elem(i as u16)))
            .collect();
        let covers = (1..n)
            .map(|i| (Elem(i as u16 - 1), Elem(i as u16)))
            .collect();
        Self::from_parts(names, index, covers, PosetKind::Chain)
    }

    /// Pairwise incomparable letters.
    pub fn antichain<S: AsRef<str>>(labels: &[S]) -> Result<Poset> {
        let mut p =
            Self::build::<&str>(&labels.iter().map(AsRef::as_ref).collect::<Vec<_>>(), &[])?;
        p.kind = PosetKind::Antichain;
        Ok(p)
    }

    /// The three-element poset with `a, b < c`.
    pub fn lambda() -> Poset {
        let mut p = Self::build(&["a", "b", "c"], &[("a", "c"), ("b", "c")])
            .expect("lambda is a valid poset");
        p.kind = PosetKind::Lambda;
        p
    }

    pub fn from_file(file: &PosetFile) -> Result<Poset> {
        let covers: Vec<(&str, &str)> = file
            .covers
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let elements: Vec<&str> = file.elements.iter().map(String::as_str).collect();
        Self::build(&elements, &covers)
    }

    pub fn from_json(text: &str) -> Result<Poset> {
        let file: PosetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            elements: self.names.clone(),
            covers: self
                .cover_names()
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn kind(&self) -> PosetKind {
        self.kind
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.names.len()).map(|i| Elem(i as u16))
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    fn cover_names(&self) -> Vec<(&str, &str)> {
        self.covers
            .iter()
            .map(|&(a, b)| (self.name(a), self.name(b)))
            .collect()
    }

    pub fn lower_covers(&self, x: Elem) -> &[Elem] {
        &self.lower_covers[x.index()]
    }

    /// `x ≤ y` in the ground poset.
    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x.index()][y.index()]
    }

    pub fn leq_by_name(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq(self.elem(x)?, self.elem(y)?))
    }

    /// `x ≤ y` in `P̂`, where `None` is the adjoined bottom.
    #[inline]
    pub fn leq_hat(&self, x: Slot, y: Slot) -> bool {
        match (x, y) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => self.leq(a, b),
        }
    }

    /// Length of the longest chain of `P` ending at `x` (0 for minimal elements).
    pub fn height(&self, x: Elem) -> usize {
        self.heights[x.index()]
    }

    pub fn is_minimal(&self, x: Elem) -> bool {
        self.lower_covers[x.index()].is_empty()
    }

    /// Elements `y ≤ x`.
    pub fn down_set(&self, x: Elem) -> Vec<Elem> {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    /// True if the order is total.
    pub fn is_chain(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    pub fn is_antichain(&self) -> bool {
        self.covers.is_empty()
    }

    /// Each connected component of the Hasse diagram is a tree with a unique
    /// minimum.
    pub fn is_rooted_forest(&self) -> bool {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.covers {
            adj[a.index()].push(b.index());
            adj[b.index()].push(a.index());
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                component.push(x);
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            let edges: usize = component.iter().map(|&x| adj[x].len()).sum::<usize>() / 2;
            if edges + 1 != component.len() {
                return false;
            }
            let minima = component
                .iter()
                .filter(|&&x| self.lower_covers[x].is_empty())
                .count();
            if minima != 1 {
                return false;
            }
        }
        true
    }
}

/// A ground poset together with `0̂` and, for rooted forests, the parent map
/// `x ↦ x⁻`.
#[derive(Debug, Clone)]
pub struct HatPoset {
    base: Poset,
    parents: Option<Vec<Slot>>,
}

impl HatPoset {
    pub fn new(base: Poset) -> HatPoset {
        let parents = base.is_rooted_forest().then(|| {
            base.elements()
                .map(|x| base.lower_covers(x).first().copied())
                .collect()
        });
        HatPoset { base, parents }
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn is_rooted_forest(&self) -> bool {
        self.parents.is_some()
    }

    /// Fails with [`Error::NotRootedForest`] unless the base is a rooted forest.
    pub fn require_forest(&self) -> Result<()> {
        if self.parents.is_some() {
            Ok(())
        } else {
            Err(not_forest(&self.base))
        }
    }

    /// The neighbour of `x` on the unique path down to `0̂`.
    pub fn parent(&self, x: Elem) -> Result<Slot> {
        match &self.parents {
            Some(p) => Ok(p[x.index()]),
            None => Err(not_forest(&self.base)),
        }
    }

    /// `parent` lifted to slots; `0̂` has no parent.
    pub fn parent_slot(&self, x: Slot) -> Result<Option<Slot>> {
        match x {
            None => Ok(None),
            Some(e) => self.parent(e).map(Some),
        }
    }
}

impl std::ops::Deref for HatPoset {
    type Target = Poset;
    fn deref(&self) -> &Poset {
        &self.base
    }
}

pub(crate) fn not_forest(p: &Poset) -> Error {
    if p.kind() == PosetKind::Lambda {
        Error::NotRootedForest(
            "Λ has μ(a,cc) = -3, which no signed count of unit-weight embeddings produces; \
             use the recurrence"
                .into(),
        )
    } else {
        Error::NotRootedForest("some element has two lower covers".into())
    }
}
