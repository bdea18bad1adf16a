//! Words over a ground poset, expansions padded with `0̂`, and embeddings.
//!
//! Positions in [`Run`]s and supports are 1-based, matching how words are
//! written by hand; the underlying vectors are ordinary 0-based slices.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::poset::{Elem, HatPoset, Poset, Slot, BOTTOM_NAME};

/// A finite word over the ground poset. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Elem>);

impl Word {
    pub fn new(letters: Vec<Elem>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Elem] {
        &self.0
    }

    /// The word as an expansion with full support.
    pub fn to_expansion(&self) -> Expansion {
        Expansion(self.0.iter().map(|&x| Some(x)).collect())
    }

    /// Sum over letters of `height + 1`; strictly increasing along `<` in `P*`.
    pub fn rank(&self, p: &Poset) -> usize {
        self.0.iter().map(|&x| p.height(x) + 1).sum()
    }

    pub fn display<'a>(&'a self, p: &'a Poset) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            poset: p,
        }
    }
}

impl Deref for Word {
    type Target = [Elem];
    fn deref(&self) -> &[Elem] {
        &self.0
    }
}

impl std::borrow::Borrow<[Elem]> for Word {
    fn borrow(&self) -> &[Elem] {
        &self.0
    }
}

impl FromIterator<Elem> for Word {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

/// A word over `P ∪ {0̂}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expansion(pub Vec<Slot>);

impl Expansion {
    pub fn slots(&self) -> &[Slot] {
        &self.0
    }

    /// 1-based positions holding a ground element.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|_| i + 1))
            .collect()
    }

    /// The word read off the support.
    pub fn restrict(&self) -> Word {
        self.0.iter().flatten().copied().collect()
    }

    pub fn display<'a>(&'a self, p: &'a Poset) -> ExpansionDisplay<'a> {
        ExpansionDisplay {
            exp: self,
            poset: p,
        }
    }
}

impl Deref for Expansion {
    type Target = [Slot];
    fn deref(&self) -> &[Slot] {
        &self.0
    }
}

/// An expansion of some word `u`, of the same length as `target`, dominated
/// positionwise by it in `P̂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub slots: Expansion,
    pub target: Word,
}

impl Embedding {
    pub fn new(slots: Expansion, target: Word, p: &Poset) -> Result<Embedding> {
        let fits = slots.len() == target.len()
            && slots
                .iter()
                .zip(target.iter())
                .all(|(&s, &t)| p.leq_hat(s, Some(t)));
        if !fits {
            return Err(Error::NotComparable {
                u: slots.display(p).to_string(),
                w: target.display(p).to_string(),
            });
        }
        Ok(Embedding { slots, target })
    }

    /// The embedded word.
    pub fn source(&self) -> Word {
        self.slots.restrict()
    }
}

/// A maximal block `[start, end]` (1-based, inclusive) of equal letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub letter: Elem,
    pub start: usize,
    pub end: usize,
}

pub fn runs(w: &Word) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, &x) in w.iter().enumerate() {
        match out.last_mut() {
            Some(run) if run.letter == x => run.end = i + 1,
            _ => out.push(Run {
                letter: x,
                start: i + 1,
                end: i + 1,
            }),
        }
    }
    out
}

/// Calls `f` with every increasing `k`-subset of `0..n`.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let need = k - buf.len();
        for i in start..=n - need {
            buf.push(i);
            go(i + 1, n, k, buf, f);
            buf.pop();
        }
    }
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

/// Every embedding of `u` into `w`, in lexicographic slot order.
pub fn all_embeddings(u: &Word, w: &Word, p: &Poset) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_subset(w.len(), u.len(), &mut |positions| {
        let dominated = positions
            .iter()
            .zip(u.iter())
            .all(|(&i, &x)| p.leq(x, w[i]));
        if dominated {
            let mut slots = vec![None; w.len()];
            for (&i, &x) in positions.iter().zip(u.iter()) {
                slots[i] = Some(x);
            }
            out.push(Embedding {
                slots: Expansion(slots),
                target: w.clone(),
            });
        }
    });
    out.sort();
    out
}

/// The embedding of `u` into the expansion `eta_w` whose support dominates
/// every other embedding's support componentwise, found by matching letters of
/// `u` greedily from the right. `None` if `u` does not embed.
pub fn rightmost_embedding(u: &Word, eta_w: &Expansion, p: &Poset) -> Option<Expansion> {
    let mut slots = vec![None; eta_w.len()];
    let mut pos = eta_w.len();
    for &x in u.iter().rev() {
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if let Some(y) = eta_w[pos] {
                if p.leq(x, y) {
                    slots[pos] = Some(x);
                    break;
                }
            }
        }
    }
    Some(Expansion(slots))
}

/// Normality of an embedding with respect to its target word: every slot is
/// `w(i)`, `w(i)⁻` or `0̂`; in each run `[r,t]` of a minimal letter the
/// positions `(r,t]` are supported, and in each run of a non-minimal letter
/// the head `r` is supported.
pub fn is_normal(eta: &Embedding, h: &HatPoset) -> Result<bool> {
    h.require_forest()?;
    let w = &eta.target;
    if eta.slots.len() != w.len() {
        return Ok(false);
    }
    for (&s, &x) in eta.slots.iter().zip(w.iter()) {
        if s != Some(x) && s.is_some() && s != h.parent(x)? {
            return Ok(false);
        }
    }
    for run in runs(w) {
        let ok = if h.is_minimal(run.letter) {
            (run.start + 1..=run.end).all(|i| eta.slots[i - 1].is_some())
        } else {
            eta.slots[run.start - 1].is_some()
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Normal embeddings of `u` into `w`, obtained by filtering
/// [`all_embeddings`].
pub fn normal_embeddings(u: &Word, w: &Word, h: &HatPoset) -> Result<Vec<Embedding>> {
    h.require_forest()?;
    let mut out = Vec::new();
    for eta in all_embeddings(u, w, h) {
        if is_normal(&eta, h)? {
            out.push(eta);
        }
    }
    Ok(out)
}

fn require_normal(eta: &Embedding, h: &HatPoset) -> Result<()> {
    if is_normal(eta, h)? {
        Ok(())
    } else {
        Err(Error::NotNormal(eta.slots.display(h).to_string()))
    }
}

/// Number of positions with `η(i) = w(i)⁻`. At a minimal `w(i)` the parent is
/// `0̂`, so a zero there counts.
pub fn defect(eta: &Embedding, h: &HatPoset) -> Result<usize> {
    require_normal(eta, h)?;
    let mut d = 0;
    for (&s, &x) in eta.slots.iter().zip(eta.target.iter()) {
        if s != Some(x) && s == h.parent(x)? {
            d += 1;
        }
    }
    Ok(d)
}

/// Number of positions with `η(i) = 0̂` where `w(i)` is not minimal.
pub fn zero_defect(eta: &Embedding, h: &HatPoset) -> Result<usize> {
    require_normal(eta, h)?;
    Ok(eta
        .slots
        .iter()
        .zip(eta.target.iter())
        .filter(|(s, &x)| s.is_none() && !h.is_minimal(x))
        .count())
}

// ---------------------------------------------------------------------------
// text syntax

fn compact(p: &Poset) -> bool {
    p.names().iter().all(|n| n.chars().count() == 1)
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    poset: &'a Poset,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("ε");
        }
        let sep = if compact(self.poset) { "" } else { "," };
        for (i, &x) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            f.write_str(self.poset.name(x))?;
        }
        Ok(())
    }
}

pub struct ExpansionDisplay<'a> {
    exp: &'a Expansion,
    poset: &'a Poset,
}

impl fmt::Display for ExpansionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_empty() {
            return f.write_str("ε");
        }
        let sep = if compact(self.poset) { "" } else { "," };
        for (i, s) in self.exp.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            match s {
                Some(x) => f.write_str(self.poset.name(*x))?,
                None => f.write_str(BOTTOM_NAME)?,
            }
        }
        Ok(())
    }
}

fn tokens<'a>(text: &'a str, p: &Poset) -> Vec<&'a str> {
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        return Vec::new();
    }
    if text.contains(',') {
        text.split(',').map(str::trim).collect()
    } else if compact(p) {
        text.char_indices()
            .map(|(i, c)| &text[i..i + c.len_utf8()])
            .collect()
    } else {
        vec![text]
    }
}

/// Parses comma-separated element names, or a compact string of
/// single-character names when every element name is one character.
pub fn parse_word(text: &str, p: &Poset) -> Result<Word> {
    tokens(text, p)
        .into_iter()
        .map(|t| {
            if t == BOTTOM_NAME {
                Err(Error::Parse(format!(
                    "`{BOTTOM_NAME}` is not a letter of a word"
                )))
            } else {
                p.elem(t)
            }
        })
        .collect()
}

/// Like [`parse_word`], with `0` standing for `0̂`.
pub fn parse_expansion(text: &str, p: &Poset) -> Result<Expansion> {
    tokens(text, p)
        .into_iter()
        .map(|t| {
            if t == BOTTOM_NAME {
                Ok(None)
            } else {
                p.elem(t).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Expansion)
}

/// All words of length at most `max_len`, shortest first.
pub fn all_words(p: &Poset, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * p.len());
        for w in &layer {
            for x in p.elements() {
                let mut v = w.0.clone();
                v.push(x);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
