//! Discrete Morse matching on the order complex of a composition interval.
//!
//! Each maximal chain `w = v₀ ⋗ v₁ ⋗ … ⋗ v_d = u` is labelled by walking
//! expansions down from `w`: every cover lowers one position by one (a `1`
//! becoming `0̂` is taken at the head of its run), and that position is the
//! edge label. Chains are then taken in lexicographic label order, which is a
//! poset-lexicographic order, and the Babson–Hersh construction is run chain
//! by chain: minimal skipped intervals (MSIs), their disjoint J-intervals,
//! the new faces, and the three-case matching.
//!
//! Faces of a chain are bitmasks over its vertex indices; bit `t` stands for
//! `v_t` and only interior indices `1..d` are ever set.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{interval, maximal_chains, Interval, MaximalChain};
use crate::poset::{HatPoset, Slot};
use crate::report::VerificationReport;
use crate::words::{
    defect, normal_embeddings, rightmost_embedding, zero_defect, Embedding, Expansion, Word,
};

/// A maximal chain with the expansions of its vertices into `w` and its edge
/// labels (1-based positions of `w`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChain {
    pub chain: MaximalChain,
    pub embeddings: Vec<Expansion>,
    pub labels: Vec<usize>,
}

impl LabeledChain {
    pub fn length(&self) -> usize {
        self.labels.len()
    }

    /// Expansion of the bottom vertex into `w`.
    pub fn end(&self) -> &Expansion {
        self.embeddings.last().expect("a chain has a bottom")
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.labels.windows(2).all(|p| p[0] >= p[1])
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.labels.windows(2).all(|p| p[0] <= p[1])
    }

    /// Vertex indices `j` with `l_j > l_{j+1}`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.labels.len())
            .filter(|&j| self.labels[j - 1] > self.labels[j])
            .collect()
    }

    fn interior_mask(&self) -> u64 {
        let d = self.length();
        if d < 2 {
            0
        } else {
            ((1u64 << d) - 1) & !1
        }
    }
}

/// The open stretch `C(v_lo, v_hi) = {v_{lo+1}, …, v_{hi-1}}` of a fixed chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChainInterval {
    pub lo: usize,
    pub hi: usize,
}

impl ChainInterval {
    pub fn new(lo: usize, hi: usize) -> ChainInterval {
        assert!(hi >= lo + 2, "chain interval ({lo},{hi}) is empty");
        ChainInterval { lo, hi }
    }

    pub fn first(&self) -> usize {
        self.lo + 1
    }

    pub fn last(&self) -> usize {
        self.hi - 1
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        self.first()..=self.last()
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &ChainInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn mask(&self) -> u64 {
        self.vertices().fold(0, |m, t| m | 1 << t)
    }

    fn from_mask(mask: u64) -> ChainInterval {
        let first = mask.trailing_zeros() as usize;
        let last = 63 - mask.leading_zeros() as usize;
        debug_assert_eq!(
            mask.count_ones() as usize,
            last - first + 1,
            "J-interval is not contiguous"
        );
        ChainInterval::new(first - 1, last + 1)
    }
}

impl std::fmt::Display for ChainInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A face of the order complex inside one chain, as a vertex-index bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face(pub u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn vertices(self) -> Vec<usize> {
        (0..64).filter(|t| self.0 >> t & 1 == 1).collect()
    }

    pub fn dim(self) -> i32 {
        self.0.count_ones() as i32 - 1
    }

    pub fn contains(self, t: usize) -> bool {
        self.0 >> t & 1 == 1
    }

    fn meets_all(self, masks: &[u64]) -> bool {
        masks.iter().all(|m| self.0 & m != 0)
    }
}

fn require_chain(h: &HatPoset) -> Result<()> {
    if h.is_chain() {
        Ok(())
    } else {
        Err(Error::NotAChainPoset)
    }
}

fn not_cover(x: &Word, y: &Word, h: &HatPoset) -> Error {
    Error::NotComparable {
        u: y.display(h).to_string(),
        w: x.display(h).to_string(),
    }
}

/// The letter of `x` (0-based) lowered by the cover `x ⋗ y`; a removed `1` is
/// taken at the head of its run.
fn cover_letter(x: &Word, y: &Word, h: &HatPoset) -> Result<usize> {
    let bad = || not_cover(x, y, h);
    let q = if x.len() == y.len() {
        let diff: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
        if diff.len() != 1 || h.parent(x[diff[0]])? != Some(y[diff[0]]) {
            return Err(bad());
        }
        diff[0]
    } else if x.len() == y.len() + 1 {
        let mut q = (0..y.len()).find(|&i| x[i] != y[i]).unwrap_or(y.len());
        if !h.is_minimal(x[q]) {
            return Err(bad());
        }
        while q > 0 && x[q - 1] == x[q] {
            q -= 1;
        }
        if x[..q] != y[..q] || x[q + 1..] != y[q..] {
            return Err(bad());
        }
        q
    } else {
        return Err(bad());
    };
    Ok(q)
}

/// Position of `eta` holding the `q`-th letter of its restriction.
fn support_position(eta: &Expansion, q: usize) -> Option<usize> {
    eta.iter()
        .enumerate()
        .filter(|(_, s)| s.is_some())
        .nth(q)
        .map(|(i, _)| i)
}

/// One cover step `x ⋗ y` applied to the expansion `eta_x` of `x`: the
/// decreased position of `η` (0-based) and the new slot value there.
fn cover_step(x: &Word, eta_x: &Expansion, y: &Word, h: &HatPoset) -> Result<(usize, Slot)> {
    let q = cover_letter(x, y, h)?;
    let pos = support_position(eta_x, q).ok_or_else(|| not_cover(x, y, h))?;
    Ok((pos, h.parent(x[q])?))
}

/// The lowered letter of every cover of an interval, aligned with
/// [`Interval::lower_covers`].
struct CoverLetters(Vec<Vec<usize>>);

impl CoverLetters {
    fn new(iv: &Interval, h: &HatPoset) -> Result<CoverLetters> {
        let els = iv.elements();
        (0..iv.len())
            .map(|x| {
                iv.lower_covers(x)
                    .iter()
                    .map(|&y| cover_letter(&els[x], &els[y], h))
                    .collect()
            })
            .collect::<Result<_>>()
            .map(CoverLetters)
    }
}

/// Labels a maximal chain of a composition interval with top `w`.
pub fn chain_labels(chain: &MaximalChain, w: &Word, h: &HatPoset) -> Result<LabeledChain> {
    require_chain(h)?;
    let mut eta = w.to_expansion();
    let mut embeddings = Vec::with_capacity(chain.vertices.len());
    let mut labels = Vec::with_capacity(chain.length());
    embeddings.push(eta.clone());
    for pair in chain.vertices.windows(2) {
        let (pos, slot) = cover_step(&pair[0], &eta, &pair[1], h)?;
        eta.0[pos] = slot;
        labels.push(pos + 1);
        embeddings.push(eta.clone());
    }
    Ok(LabeledChain {
        chain: chain.clone(),
        embeddings,
        labels,
    })
}

/// The chain obtained from `w` by lowering the positions `labels` in order,
/// whether or not each step is the normal one. `None` if a step lowers `0̂`.
pub fn chain_from_labels(w: &Word, labels: &[usize], h: &HatPoset) -> Result<Option<MaximalChain>> {
    require_chain(h)?;
    let mut eta = w.to_expansion();
    let mut vertices = vec![w.clone()];
    for &l in labels {
        let Some(slot) = eta.get(l.wrapping_sub(1)).copied() else {
            return Ok(None);
        };
        let Some(x) = slot else {
            return Ok(None);
        };
        eta.0[l - 1] = h.parent(x)?;
        vertices.push(eta.restrict());
    }
    Ok(Some(MaximalChain { vertices }))
}

/// Sorts chains by label sequence. Distinct chains of one interval always
/// carry distinct labels; a tie is reported as an error.
pub fn pl_sort(mut chains: Vec<LabeledChain>) -> Result<Vec<LabeledChain>> {
    chains.sort_by(|a, b| a.labels.cmp(&b.labels));
    if let Some(pair) = chains.windows(2).find(|p| p[0].labels == p[1].labels) {
        return Err(Error::DuplicateLabelSequence(format!(
            "{:?}",
            pair[0].labels
        )));
    }
    Ok(chains)
}

/// All maximal chains of `[u, w]`, labelled and in lexicographic label order.
pub fn ordered_chains(iv: &Interval, h: &HatPoset) -> Result<Vec<LabeledChain>> {
    let chains = maximal_chains(iv)
        .iter()
        .map(|c| chain_labels(c, &iv.top, h))
        .collect::<Result<Vec<_>>>()?;
    pl_sort(chains)
}

fn keep_minimal(mut found: Vec<ChainInterval>) -> Vec<ChainInterval> {
    found.sort();
    found.dedup();
    let minimal: Vec<ChainInterval> = found
        .iter()
        .filter(|a| !found.iter().any(|b| b != *a && a.contains(b)))
        .copied()
        .collect();
    minimal
}

/// MSIs of `ordered[k]`. An earlier chain `C'` skips the interval `I` exactly
/// when `C - I ⊆ C'`, that is when `I` spans every vertex of `C` missing from
/// `C'`; the MSIs are the minimal such spans.
pub fn msis(ordered: &[LabeledChain], k: usize) -> Vec<ChainInterval> {
    let c = &ordered[k];
    let d = c.length();
    let mut found = Vec::new();
    for earlier in &ordered[..k] {
        let present = &earlier.chain.vertices;
        let mut missing = (1..d).filter(|&t| !present.contains(&c.chain.vertices[t]));
        if let Some(first) = missing.next() {
            let last = missing.next_back().unwrap_or(first);
            found.push(ChainInterval::new(first - 1, last + 1));
        }
    }
    keep_minimal(found)
}

/// MSIs of one chain computed from the interval alone.
///
/// An earlier chain agreeing with `c` down to `v_m` and first leaving it
/// through the cover `y` of `v_m` must use a smaller label at that step; it
/// can rejoin `c` at `v_j` exactly when `v_j ≤ y`. The skipped intervals are
/// the `(i, j)` containing such an `(m, j)`, so the minimal ones are found
/// among the pairs `(m, first j with v_j ≤ y)`.
pub fn msis_local(iv: &Interval, c: &LabeledChain, h: &HatPoset) -> Result<Vec<ChainInterval>> {
    Ok(msis_cached(iv, &CoverLetters::new(iv, h)?, c))
}

fn msis_cached(iv: &Interval, letters: &CoverLetters, c: &LabeledChain) -> Vec<ChainInterval> {
    let d = c.length();
    let verts = &c.chain.vertices;
    let idx: Vec<usize> = verts
        .iter()
        .map(|v| iv.position(v).expect("chain vertices lie in the interval"))
        .collect();
    let mut found = Vec::new();
    for m in 0..d.saturating_sub(1) {
        let mut best: Option<usize> = None;
        for (&y, &q) in iv.lower_covers(idx[m]).iter().zip(&letters.0[idx[m]]) {
            if y == idx[m + 1] {
                continue;
            }
            let pos =
                support_position(&c.embeddings[m], q).expect("cover letters lie in the support");
            if pos + 1 >= c.labels[m] {
                continue;
            }
            let j = (m + 2..=d)
                .find(|&j| iv.leq_idx(idx[j], y))
                .expect("the bottom lies below every element");
            best = Some(best.map_or(j, |b| b.min(j)));
        }
        if let Some(j) = best {
            found.push(ChainInterval::new(m, j));
        }
    }
    keep_minimal(found)
}

/// Greedy disjointification: take the first interval, subtract it from the
/// rest, discard the non-minimal remainders, repeat.
pub fn j_intervals(msis: &[ChainInterval]) -> Vec<ChainInterval> {
    let mut remaining: Vec<u64> = msis.iter().map(ChainInterval::mask).collect();
    let mut taken = 0u64;
    let mut out = Vec::new();
    loop {
        let mut modified: Vec<u64> = remaining
            .iter()
            .map(|&s| s & !taken)
            .filter(|&s| s != 0)
            .collect();
        let snapshot = modified.clone();
        modified.retain(|&a| !snapshot.iter().any(|&b| b != a && b & !a == 0));
        modified.dedup();
        let Some(&first) = modified.first() else {
            break;
        };
        taken |= first;
        out.push(ChainInterval::from_mask(first));
        remaining = modified.into_iter().skip(1).collect();
    }
    out
}

fn union_mask(family: &[ChainInterval]) -> u64 {
    family.iter().fold(0, |m, i| m | i.mask())
}

/// Which of the three matching rules applies to a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatchingCase {
    /// The MSIs miss a vertex; toggle the first such vertex.
    Uncovered { pivot: usize },
    /// The J-intervals cover the chain; one critical cell.
    Covered,
    /// The MSIs cover but the J-intervals do not.
    Mixed { pivot: usize },
}

/// The matching data of one chain in PL-order.
#[derive(Debug, Clone)]
pub struct ChainMorse {
    /// Position in PL-order, 0-based.
    pub index: usize,
    pub chain: LabeledChain,
    pub msis: Vec<ChainInterval>,
    pub j_intervals: Vec<ChainInterval>,
    pub case: MatchingCase,
    masks: Masks,
}

#[derive(Debug, Clone)]
struct Masks {
    interior: u64,
    msis: Vec<u64>,
    j: Vec<(u64, u64)>,
    j_union: u64,
    sigma: u64,
}

impl ChainMorse {
    fn new(index: usize, chain: LabeledChain, msis: Vec<ChainInterval>) -> ChainMorse {
        let interior = chain.interior_mask();
        let j_intervals = j_intervals(&msis);
        let masks = Masks {
            interior,
            msis: msis.iter().map(ChainInterval::mask).collect(),
            j: j_intervals
                .iter()
                .map(|j| (j.mask(), 1 << j.first()))
                .collect(),
            j_union: union_mask(&j_intervals),
            sigma: j_intervals.iter().fold(0, |m, j| m | 1 << j.first()),
        };
        let first_outside = |covered: u64| (1..chain.length()).find(|&t| covered >> t & 1 == 0);
        let msi_union = union_mask(&msis);
        let case = if msi_union != interior {
            MatchingCase::Uncovered {
                pivot: first_outside(msi_union).expect("uncovered vertex"),
            }
        } else if masks.j_union == interior {
            MatchingCase::Covered
        } else {
            MatchingCase::Mixed {
                pivot: first_outside(masks.j_union).expect("uncovered vertex"),
            }
        };
        ChainMorse {
            index,
            chain,
            msis,
            j_intervals,
            case,
            masks,
        }
    }

    pub fn is_critical(&self) -> bool {
        self.case == MatchingCase::Covered
    }

    /// Dimension `#J - 1` of the critical cell, if any.
    pub fn dimension(&self) -> Option<i32> {
        self.is_critical()
            .then(|| self.j_intervals.len() as i32 - 1)
    }

    /// The face made of the first vertex of every J-interval.
    pub fn sigma(&self) -> Face {
        Face(self.masks.sigma)
    }

    pub fn critical_cell(&self) -> Option<Face> {
        self.is_critical().then(|| self.sigma())
    }

    /// A face of this chain is new when it meets every MSI.
    pub fn is_new(&self, f: Face) -> bool {
        f.0 & !self.masks.interior == 0 && f.meets_all(&self.masks.msis)
    }

    pub fn new_faces(&self) -> impl Iterator<Item = Face> + '_ {
        subsets(self.masks.interior)
            .map(Face)
            .filter(move |&f| f.meets_all(&self.masks.msis))
    }

    fn toggle_first_j(&self, f: Face) -> Face {
        for &(mask, head) in &self.masks.j {
            if f.0 & mask != head {
                return Face(f.0 ^ head);
            }
        }
        unreachable!("face agrees with sigma on every J-interval")
    }

    /// Matched partner of a new face; `None` for the critical cell.
    pub fn partner(&self, f: Face) -> Option<Face> {
        match self.case {
            MatchingCase::Uncovered { pivot } => Some(Face(f.0 ^ 1 << pivot)),
            MatchingCase::Covered => (f != self.sigma()).then(|| self.toggle_first_j(f)),
            MatchingCase::Mixed { pivot } => {
                if f.0 & self.masks.j_union != self.masks.sigma {
                    Some(self.toggle_first_j(f))
                } else {
                    Some(Face(f.0 ^ 1 << pivot))
                }
            }
        }
    }

    /// Matched pairs `(lower, upper)` among this chain's new faces.
    pub fn pairs(&self) -> Vec<(Face, Face)> {
        self.new_faces()
            .filter_map(|f| self.partner(f).map(|g| (f, g)))
            .filter(|(f, g)| f.0.count_ones() < g.0.count_ones())
            .collect()
    }

    /// Faces as sets of words.
    pub fn face_words(&self, f: Face) -> Vec<Word> {
        f.vertices()
            .into_iter()
            .map(|t| self.chain.chain.vertices[t].clone())
            .collect()
    }
}

fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    // all submasks of `mask`, counting down and ending with 0
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// New faces of `ordered[k]`: every face for the first chain, otherwise the
/// faces meeting every MSI.
pub fn new_faces(ordered: &[LabeledChain], k: usize) -> Vec<Face> {
    let c = ChainMorse::new(k, ordered[k].clone(), msis(ordered, k));
    let mut out: Vec<Face> = c.new_faces().collect();
    out.sort();
    out
}

/// Per-chain matching data for `[u, w]` plus the critical-cell tally.
#[derive(Debug, Clone)]
pub struct MorseReport {
    pub bottom: Word,
    pub top: Word,
    pub chains: Vec<ChainMorse>,
    /// `m̃_d`: number of critical cells per dimension.
    pub critical_counts: BTreeMap<i32, usize>,
    /// `Σ (-1)^d m̃_d`.
    pub euler: i64,
}

impl MorseReport {
    pub fn critical(&self) -> impl Iterator<Item = &ChainMorse> {
        self.chains.iter().filter(|c| c.is_critical())
    }
}

/// Intervals with at most this many chains also compare the fast MSIs with
/// the quadratic definition in [`verify_morse_theorem`].
pub const DEFINITION_CHECK_LIMIT: usize = 500;

fn sign(dim: i32) -> i64 {
    if dim.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn proper_interval(u: &Word, w: &Word, h: &HatPoset) -> Result<Interval> {
    require_chain(h)?;
    if u == w {
        return Err(Error::BottomEqualsTop);
    }
    interval(u, w, h)
}

fn build_report(iv: &Interval, ordered: Vec<LabeledChain>, h: &HatPoset) -> Result<MorseReport> {
    let letters = CoverLetters::new(iv, h)?;
    let mut chains = Vec::with_capacity(ordered.len());
    for (k, c) in ordered.into_iter().enumerate() {
        let m = msis_cached(iv, &letters, &c);
        chains.push(ChainMorse::new(k, c, m));
    }
    let mut critical_counts = BTreeMap::new();
    let mut euler = 0;
    for d in chains.iter().filter_map(ChainMorse::dimension) {
        *critical_counts.entry(d).or_insert(0) += 1;
        euler += sign(d);
    }
    Ok(MorseReport {
        bottom: iv.bottom.clone(),
        top: iv.top.clone(),
        chains,
        critical_counts,
        euler,
    })
}

/// Runs the matching construction on `[u, w]`, `u < w`, over a chain poset.
pub fn morse_matching(u: &Word, w: &Word, h: &HatPoset) -> Result<MorseReport> {
    let iv = proper_interval(u, w, h)?;
    let ordered = ordered_chains(&iv, h)?;
    build_report(&iv, ordered, h)
}

/// Critical chains of `[u, w]` with the dimension of their critical cell.
pub fn critical_chains(u: &Word, w: &Word, h: &HatPoset) -> Result<Vec<(LabeledChain, i32)>> {
    let report = morse_matching(u, w, h)?;
    Ok(report
        .chains
        .into_iter()
        .filter_map(|c| c.dimension().map(|d| (c.chain, d)))
        .collect())
}

/// Faces of the order complex of the open interval, counted plainly and with
/// sign `(-1)^dim`, by dynamic programming over chains ending at each element.
pub fn order_complex_counts(iv: &Interval) -> (u64, i64) {
    let n = iv.len();
    if n < 2 {
        return (0, 0);
    }
    let interior = 1..n - 1;
    let mut count = vec![0u64; n];
    let mut signed = vec![0i64; n];
    for x in interior.clone() {
        let (mut c, mut s) = (1u64, 1i64);
        for y in 1..x {
            if iv.leq_idx(y, x) {
                c += count[y];
                s -= signed[y];
            }
        }
        count[x] = c;
        signed[x] = s;
    }
    let total: u64 = 1 + interior.clone().map(|x| count[x]).sum::<u64>();
    let chi: i64 = -1 + interior.map(|x| signed[x]).sum::<i64>();
    (total, chi)
}

/// Checks the critical-chain characterisation on `[u, w]`: the matching is a
/// valid pairing of new faces, faces are accounted for exactly, the signed
/// critical cells give `μ(u, w)`, critical chains are the weakly decreasing
/// chains ending at normal embeddings with `I = J` and `#I = d + 2D - 1`, and
/// the first chain is weakly increasing ending at the rightmost embedding.
pub fn verify_morse_theorem(u: &Word, w: &Word, h: &HatPoset) -> Result<VerificationReport> {
    let iv = proper_interval(u, w, h)?;
    let ordered = ordered_chains(&iv, h)?;
    let report = build_report(&iv, ordered, h)?;
    let show = |e: &Expansion| e.display(h).to_string();
    let mut out = VerificationReport::new(format!("morse on [{}, {}]", u.display(h), w.display(h)));
    let mu = *iv.mobius_from_bottom().last().expect("nonempty");

    let small = report.chains.len() <= DEFINITION_CHECK_LIMIT;
    let ordered: Vec<LabeledChain> = if small {
        report.chains.iter().map(|c| c.chain.clone()).collect()
    } else {
        Vec::new()
    };
    let msi_mismatch = report
        .chains
        .iter()
        .filter(|_| small)
        .find(|c| msis(&ordered, c.index) != c.msis)
        .map(|c| format!("chain {}", c.index + 1));
    out.check("MSIs match the definition", msi_mismatch.is_none(), || {
        msi_mismatch.clone().unwrap_or_default()
    });

    // Descent singletons are MSIs.
    let descent_miss = report.chains.iter().find_map(|c| {
        c.chain
            .descents()
            .into_iter()
            .find(|&j| !c.msis.contains(&ChainInterval::new(j - 1, j + 1)))
            .map(|j| format!("chain {} descent at v_{j}", c.index + 1))
    });
    out.check("descents are MSIs", descent_miss.is_none(), || {
        descent_miss.clone().unwrap_or_default()
    });

    // Matching validity and per-chain face tallies.
    let mut bad_pair = None;
    let mut new_total = 0u64;
    let mut new_signed = 0i64;
    for c in &report.chains {
        for f in c.new_faces() {
            new_total += 1;
            new_signed += sign(f.dim());
            let partner = c.partner(f);
            let ok = match partner {
                None => c.critical_cell() == Some(f),
                Some(g) => (f.0 ^ g.0).count_ones() == 1 && c.is_new(g) && c.partner(g) == Some(f),
            };
            if !ok && bad_pair.is_none() {
                bad_pair = Some(format!(
                    "chain {} face {:?} -> {:?}",
                    c.index + 1,
                    f.vertices(),
                    partner
                ));
            }
        }
    }
    out.check("matching pairs new faces", bad_pair.is_none(), || {
        bad_pair.clone().unwrap_or_default()
    });

    let (faces, chi) = order_complex_counts(&iv);
    out.check("every face new exactly once", new_total == faces, || {
        format!("{new_total} new faces, complex has {faces}")
    });
    out.check(
        "euler characteristic",
        chi == mu && new_signed == mu && report.euler == mu,
        || {
            format!(
                "faces {chi}, new faces {new_signed}, critical {}, mu {mu}",
                report.euler
            )
        },
    );

    // Critical chains versus normal embeddings.
    let normals: HashSet<Expansion> = normal_embeddings(u, w, h)?
        .into_iter()
        .map(|e| e.slots)
        .collect();
    let mut mismatch = None;
    let mut counts = None;
    let mut ends: HashMap<Expansion, usize> = HashMap::new();
    for c in &report.chains {
        let end = c.chain.end().clone();
        let predicted = c.chain.is_weakly_decreasing() && normals.contains(&end);
        if predicted != c.is_critical() && mismatch.is_none() {
            mismatch = Some(format!(
                "chain {} labels {:?} ending {} critical={}",
                c.index + 1,
                c.chain.labels,
                show(&end),
                c.is_critical()
            ));
        }
        if c.is_critical() {
            *ends.entry(end.clone()).or_insert(0) += 1;
            if normals.contains(&end) {
                let eta = Embedding {
                    slots: end.clone(),
                    target: w.clone(),
                };
                let (d, z) = (defect(&eta, h)?, zero_defect(&eta, h)?);
                let expected = (d + 2 * z) as i64 - 1;
                let ok = c.msis == c.j_intervals && c.msis.len() as i64 == expected;
                if !ok && counts.is_none() {
                    counts = Some(format!(
                        "chain {} ending {}: #I={} #J={} d={d} D={z}",
                        c.index + 1,
                        show(&end),
                        c.msis.len(),
                        c.j_intervals.len()
                    ));
                }
            }
        }
    }
    out.check(
        "critical iff weakly decreasing to a normal embedding",
        mismatch.is_none(),
        || mismatch.clone().unwrap_or_default(),
    );
    out.check("I = J and #I = d + 2D - 1", counts.is_none(), || {
        counts.clone().unwrap_or_default()
    });
    let bijective = ends.len() == normals.len()
        && ends.values().all(|&n| n == 1)
        && ends.keys().all(|e| normals.contains(e));
    out.check(
        "critical chains biject onto normal embeddings",
        bijective,
        || {
            format!(
                "{} critical ends, {} normal embeddings",
                ends.len(),
                normals.len()
            )
        },
    );
    out.check("signed critical cells equal mu", report.euler == mu, || {
        format!("critical sum {}, mu {mu}", report.euler)
    });

    let first = &report.chains[0].chain;
    let rho = rightmost_embedding(u, &w.to_expansion(), h).expect("u lies below w");
    out.check(
        "first chain increases to the rightmost embedding",
        first.is_weakly_increasing() && first.end() == &rho,
        || {
            format!(
                "first labels {:?} end {} rho {}",
                first.labels,
                show(first.end()),
                show(&rho)
            )
        },
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use crate::words::parse_word;

    fn c3() -> HatPoset {
        HatPoset::new(Poset::chain(3).unwrap())
    }

    fn sample(h: &HatPoset) -> (Interval, Vec<LabeledChain>) {
        let u = parse_word("322", h).unwrap();
        let w = parse_word("3322", h).unwrap();
        let iv = interval(&u, &w, h).unwrap();
        let ordered = ordered_chains(&iv, h).unwrap();
        (iv, ordered)
    }

    #[test]
    fn sample_labels_and_order() {
        let h = c3();
        let (_, ordered) = sample(&h);
        let labels: Vec<Vec<usize>> = ordered.iter().map(|c| c.labels.clone()).collect();
        assert_eq!(
            labels,
            vec![
                vec![1, 1, 1],
                vec![2, 2, 2],
                vec![2, 3, 3],
                vec![2, 4, 4],
                vec![3, 2, 3],
                vec![3, 3, 2],
                vec![4, 2, 4],
                vec![4, 4, 2],
            ]
        );
        let shown: Vec<String> = ordered[4]
            .embeddings
            .iter()
            .map(|e| e.display(&h).to_string())
            .collect();
        assert_eq!(shown, vec!["3322", "3312", "3212", "3202"]);
        assert_eq!(ordered[0].end().display(&h).to_string(), "0322");
        assert_eq!(ordered[7].end().display(&h).to_string(), "3220");
    }

    #[test]
    fn sample_msis() {
        let h = c3();
        let (iv, ordered) = sample(&h);
        assert!(msis(&ordered, 0).is_empty());
        assert_eq!(msis(&ordered, 1), vec![ChainInterval::new(0, 3)]);
        assert_eq!(msis(&ordered, 4), vec![ChainInterval::new(0, 2)]);
        assert_eq!(
            msis(&ordered, 7),
            vec![ChainInterval::new(0, 2), ChainInterval::new(1, 3)]
        );
        for k in 0..ordered.len() {
            assert_eq!(
                msis(&ordered, k),
                msis_local(&iv, &ordered[k], &h).unwrap(),
                "chain {k}"
            );
        }
        let js = j_intervals(&msis(&ordered, 7));
        let words: Vec<Vec<String>> = js
            .iter()
            .map(|j| {
                j.vertices()
                    .map(|t| ordered[7].embeddings[t].display(&h).to_string())
                    .collect()
            })
            .collect();
        assert_eq!(words, vec![vec!["3321"], vec!["3320"]]);
    }

    #[test]
    fn j_intervals_basic() {
        assert!(j_intervals(&[]).is_empty());
        let disjoint = vec![ChainInterval::new(0, 2), ChainInterval::new(2, 5)];
        assert_eq!(j_intervals(&disjoint), disjoint);
        // overlapping: (0,3) = {1,2}, (1,4) = {2,3} -> {1,2}, {3}
        let overlap = vec![ChainInterval::new(0, 3), ChainInterval::new(1, 4)];
        assert_eq!(
            j_intervals(&overlap),
            vec![ChainInterval::new(0, 3), ChainInterval::new(2, 4)]
        );
    }

    #[test]
    fn sample_new_faces() {
        let h = c3();
        let (_, ordered) = sample(&h);
        assert_eq!(new_faces(&ordered, 0).len(), 4);
        assert!(new_faces(&ordered, 0).contains(&Face::EMPTY));
        assert_eq!(new_faces(&ordered, 1).len(), 3);
        let fifth = new_faces(&ordered, 4);
        assert!(fifth.iter().all(|f| f.contains(1)));
        assert_eq!(fifth.len(), 2);
    }

    #[test]
    fn sample_critical() {
        let h = c3();
        let u = parse_word("322", &h).unwrap();
        let w = parse_word("3322", &h).unwrap();
        let crit = critical_chains(&u, &w, &h).unwrap();
        let got: Vec<(Vec<usize>, i32)> =
            crit.iter().map(|(c, d)| (c.labels.clone(), *d)).collect();
        assert_eq!(got, vec![(vec![2, 2, 2], 0), (vec![4, 4, 2], 1)]);
        let report = morse_matching(&u, &w, &h).unwrap();
        assert_eq!(report.euler, 0);
        let cells: Vec<Vec<String>> = report
            .critical()
            .map(|c| {
                c.face_words(c.critical_cell().unwrap())
                    .iter()
                    .map(|v| v.display(&h).to_string())
                    .collect()
            })
            .collect();
        assert_eq!(cells, vec![vec!["3222"], vec!["3321", "332"]]);
        let r = verify_morse_theorem(&u, &w, &h).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn tiny_intervals() {
        let h = HatPoset::new(Poset::chain(2).unwrap());
        let u = parse_word("2", &h).unwrap();
        let w = parse_word("22", &h).unwrap();
        let crit = critical_chains(&u, &w, &h).unwrap();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].0.labels, vec![2, 2]);
        assert_eq!(crit[0].1, 0);
        let report = morse_matching(&u, &w, &h).unwrap();
        let c = report.critical().next().unwrap();
        assert_eq!(
            c.face_words(c.critical_cell().unwrap()),
            vec![parse_word("21", &h).unwrap()]
        );

        // a cover: the empty face is critical
        let u = parse_word("1", &h).unwrap();
        let w = parse_word("2", &h).unwrap();
        let crit = critical_chains(&u, &w, &h).unwrap();
        assert_eq!(crit.len(), 1);
        assert_eq!(crit[0].1, -1);
        let report = morse_matching(&u, &w, &h).unwrap();
        assert_eq!(report.euler, -1);
        assert_eq!(report.chains[0].critical_cell(), Some(Face::EMPTY));
        assert!(verify_morse_theorem(&u, &w, &h).unwrap().passed());
    }

    /// Skipped intervals straight from the definition: `C - I` lies inside
    /// some earlier chain.
    fn brute_msis(ordered: &[LabeledChain], k: usize) -> Vec<ChainInterval> {
        let c = &ordered[k].chain.vertices;
        let d = c.len() - 1;
        let mut skipped = Vec::new();
        for lo in 0..d {
            for hi in lo + 2..=d {
                let rest: Vec<&Word> = c
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t <= lo || *t >= hi)
                    .map(|(_, v)| v)
                    .collect();
                if ordered[..k]
                    .iter()
                    .any(|e| rest.iter().all(|v| e.chain.vertices.contains(v)))
                {
                    skipped.push(ChainInterval::new(lo, hi));
                }
            }
        }
        keep_minimal(skipped)
    }

    #[test]
    fn msi_routes_agree_with_definition() {
        let h = c3();
        let words = crate::words::all_words(&h, 3);
        let mut checked = 0;
        for w in &words {
            for u in &words {
                if u == w || !crate::order::subword_leq(u, w, &h) {
                    continue;
                }
                let iv = interval(u, w, &h).unwrap();
                let ordered = ordered_chains(&iv, &h).unwrap();
                for k in 0..ordered.len() {
                    let brute = brute_msis(&ordered, k);
                    assert_eq!(msis(&ordered, k), brute, "[{u:?}, {w:?}] chain {k}");
                    assert_eq!(msis_local(&iv, &ordered[k], &h).unwrap(), brute);
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000, "{checked}");
    }

    #[test]
    fn labels_determine_chains() {
        let h = c3();
        let (_, ordered) = sample(&h);
        let w = parse_word("3322", &h).unwrap();
        for c in &ordered {
            assert_eq!(
                chain_from_labels(&w, &c.labels, &h).unwrap(),
                Some(c.chain.clone())
            );
        }
        // lowering position 1 four times runs through 0̂
        assert_eq!(chain_from_labels(&w, &[1, 1, 1, 1], &h).unwrap(), None);
        assert_eq!(chain_from_labels(&w, &[5], &h).unwrap(), None);
    }

    #[test]
    fn errors() {
        let h = c3();
        let w = parse_word("33", &h).unwrap();
        assert_eq!(
            morse_matching(&w, &w, &h).unwrap_err(),
            Error::BottomEqualsTop
        );
        let u = parse_word("333", &h).unwrap();
        assert!(matches!(
            morse_matching(&u, &w, &h),
            Err(Error::NotComparable { .. })
        ));
        let ab = HatPoset::new(Poset::antichain(&["a", "b"]).unwrap());
        let (a, aa) = (
            parse_word("a", &ab).unwrap(),
            parse_word("aa", &ab).unwrap(),
        );
        assert_eq!(
            morse_matching(&a, &aa, &ab).unwrap_err(),
            Error::NotAChainPoset
        );
        let lc = LabeledChain {
            chain: MaximalChain {
                vertices: vec![w.clone(), w.clone()],
            },
            embeddings: vec![],
            labels: vec![1],
        };
        assert!(matches!(
            pl_sort(vec![lc.clone(), lc]),
            Err(Error::DuplicateLabelSequence(_))
        ));
    }
}
