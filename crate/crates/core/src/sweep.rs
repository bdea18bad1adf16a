//! Exhaustive property sweeps over all small pairs.
//!
//! Every sweep returns a [`SweepOutcome`] whose failures are sorted by input
//! pair (shortest top word first), so the first failure is a smallest
//! counterexample and output is independent of scheduling.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::extras::{
    check_lambda_conjecture, composition_to_layered, factor_interval, factor_leq, factor_mobius,
    pattern_mobius, LambdaCheck,
};
use crate::involution::verify_involution;
use crate::morse::verify_morse_theorem;
use crate::order::{interval, maximal_chains, subword_leq};
use crate::poset::{HatPoset, Poset};
use crate::report::VerificationReport;
use crate::words::{all_words, Word};
use crate::{mobius_antichain, mobius_formula};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SweepOutcome {
    fn new(name: impl Into<String>, cases: usize, mut keyed: Vec<Failure>) -> Self {
        keyed.sort();
        SweepOutcome {
            name: name.into(),
            cases,
            failures: keyed.into_iter().map(|(_, s)| s).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A failing pair, keyed for sorting by `(|w|, w, u)`, with its message.
type Failure = ((usize, Word, Word), String);

fn key(u: &Word, w: &Word) -> (usize, Word, Word) {
    (w.len(), w.clone(), u.clone())
}

/// All words of length at most `max_len` with, for each, the indices of the
/// words strictly below it.
pub struct Universe {
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    /// Strictly smaller words, in increasing rank order.
    pub below: Vec<Vec<usize>>,
}

impl Universe {
    pub fn new(p: &Poset, max_len: usize) -> Universe {
        let mut words = all_words(p, max_len);
        words.sort_by(|a, b| a.rank(p).cmp(&b.rank(p)).then_with(|| a.cmp(b)));
        let ranks: Vec<usize> = words.iter().map(|w| w.rank(p)).collect();
        let below: Vec<Vec<usize>> = (0..words.len())
            .into_par_iter()
            .map(|j| {
                (0..j)
                    .filter(|&i| ranks[i] < ranks[j] && subword_leq(&words[i], &words[j], p))
                    .collect()
            })
            .collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Universe {
            words,
            index,
            below,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `μ(v, w)` for every `v ≤ w` by the recurrence
    /// `μ(v, w) = -Σ_{v < x ≤ w} μ(x, w)`, as `(v index, μ)` pairs.
    pub fn mobius_to(&self, w: usize) -> Vec<(usize, i64)> {
        let mut acc: HashMap<usize, i64> = self.below[w].iter().map(|&v| (v, 0)).collect();
        let mut out = Vec::with_capacity(acc.len() + 1);
        out.push((w, 1));
        for &v in self.below[w].iter() {
            *acc.get_mut(&v).expect("member") += 1;
        }
        for &x in self.below[w].iter().rev() {
            let m = -acc[&x];
            out.push((x, m));
            if m != 0 {
                for y in &self.below[x] {
                    *acc.get_mut(y).expect("down-set of a member stays inside") += m;
                }
            }
        }
        out
    }
}

/// Formula (and, over an antichain, the closed form) against the recurrence
/// on every pair `u ≤ w` with `|w| ≤ max_len`.
pub fn formula_sweep(h: &HatPoset, max_len: usize) -> Result<SweepOutcome> {
    h.require_forest()?;
    let uni = Universe::new(h, max_len);
    let antichain = h.is_antichain();
    let per_top: Vec<Result<(usize, Vec<_>)>> = (0..uni.len())
        .into_par_iter()
        .map(|wi| {
            let w = &uni.words[wi];
            let values = uni.mobius_to(wi);
            let mut bad = Vec::new();
            for &(vi, mu) in &values {
                let u = &uni.words[vi];
                let f = mobius_formula(u, w, h)?;
                let b = if antichain {
                    Some(mobius_antichain(u, w, h)?)
                } else {
                    None
                };
                if f != mu || b.is_some_and(|b| b != mu) {
                    let extra = b.map(|b| format!(", closed form {b}")).unwrap_or_default();
                    bad.push((
                        key(u, w),
                        format!(
                            "[{}, {}]: recurrence {mu}, formula {f}{extra}",
                            u.display(h),
                            w.display(h)
                        ),
                    ));
                }
            }
            Ok((values.len(), bad))
        })
        .collect();
    let mut cases = 0;
    let mut failures = Vec::new();
    for r in per_top {
        let (n, bad) = r?;
        cases += n;
        failures.extend(bad);
    }
    Ok(SweepOutcome::new(
        format!("formula over {:?}", h.kind()),
        cases,
        failures,
    ))
}

/// Pairs `u < w` with `|w| ≤ max_len`, shortest top first.
pub fn proper_pairs(p: &Poset, max_len: usize) -> Vec<(Word, Word)> {
    let uni = &Universe::new(p, max_len);
    let mut out: Vec<(Word, Word)> = (0..uni.len())
        .flat_map(|w| {
            uni.below[w]
                .iter()
                .map(move |&u| (uni.words[u].clone(), uni.words[w].clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by_key(|(u, w)| key(u, w));
    out
}

fn report_sweep<F>(name: &str, h: &HatPoset, max_len: usize, verify: F) -> Result<SweepOutcome>
where
    F: Fn(&Word, &Word, &HatPoset) -> Result<VerificationReport> + Sync,
{
    let pairs = proper_pairs(h, max_len);
    let results: Vec<Result<Option<Failure>>> = pairs
        .par_iter()
        .map(|(u, w)| {
            let r = verify(u, w, h)?;
            Ok((!r.passed()).then(|| {
                let why: Vec<String> = r
                    .failures()
                    .map(|c| match &c.witness {
                        Some(wit) => format!("{} ({wit})", c.name),
                        None => c.name.clone(),
                    })
                    .collect();
                (key(u, w), format!("{}: {}", r.subject, why.join("; ")))
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(SweepOutcome::new(name, pairs.len(), failures))
}

/// [`verify_involution`] on every pair `u < w` with `|w| ≤ max_len`.
pub fn involution_sweep(h: &HatPoset, max_len: usize) -> Result<SweepOutcome> {
    h.require_forest()?;
    report_sweep("involution", h, max_len, verify_involution)
}

/// [`verify_morse_theorem`] on every pair `u < w` with `|w| ≤ max_len` over a
/// chain.
pub fn morse_sweep(max_part: usize, max_len: usize) -> Result<SweepOutcome> {
    let h = HatPoset::new(Poset::chain(max_part)?);
    report_sweep("morse", &h, max_len, verify_morse_theorem)
}

fn multinomial(parts: &[usize]) -> u64 {
    // product of binomials C(m_1 + ... + m_k, m_k)
    let mut total = 0u64;
    let mut out = 1u64;
    for &m in parts {
        for i in 1..=m as u64 {
            total += 1;
            out = out * total / i;
        }
    }
    out
}

/// Same-length pairs over `chain(max_part)`: the number of maximal chains of
/// `[u, w]` is the number of arrangements of the multiset with `w(i) - u(i)`
/// copies of `i`.
pub fn same_length_sweep(max_part: usize, max_len: usize) -> Result<SweepOutcome> {
    let p = Poset::chain(max_part)?;
    let pairs: Vec<(Word, Word)> = {
        let uni = Universe::new(&p, max_len);
        let mut out = Vec::new();
        for (wi, w) in uni.words.iter().enumerate() {
            out.push((w.clone(), w.clone()));
            for &ui in &uni.below[wi] {
                if uni.words[ui].len() == w.len() {
                    out.push((uni.words[ui].clone(), w.clone()));
                }
            }
        }
        out
    };
    let results: Vec<Result<Option<Failure>>> = pairs
        .par_iter()
        .map(|(u, w)| {
            let gaps: Vec<usize> = (0..w.len()).map(|i| w[i].index() - u[i].index()).collect();
            let expected = multinomial(&gaps);
            let got = maximal_chains(&interval(u, w, &p)?).len() as u64;
            Ok((got != expected).then(|| {
                (
                    key(u, w),
                    format!(
                        "[{}, {}]: {got} chains, expected {expected}",
                        u.display(&p),
                        w.display(&p)
                    ),
                )
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(SweepOutcome::new("same length", pairs.len(), failures))
}

/// All compositions with total at most `max_total`, as words over
/// `chain(max_total)`.
pub fn compositions(max_total: usize) -> Vec<Word> {
    fn go(left: usize, buf: &mut Vec<crate::poset::Elem>, out: &mut Vec<Word>) {
        out.push(Word(buf.clone()));
        for part in 1..=left {
            buf.push(crate::poset::Elem((part - 1) as u16));
            go(left - part, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(max_total, &mut Vec::new(), &mut out);
    out
}

/// Pattern Möbius of layered permutations against composition Möbius for all
/// pairs of compositions `u ≤ w` with total at most `max_total`.
pub fn layered_sweep(max_total: usize) -> Result<SweepOutcome> {
    let h = HatPoset::new(Poset::chain(max_total.max(1))?);
    let comps = compositions(max_total);
    let pairs: Vec<(&Word, &Word)> = comps
        .iter()
        .flat_map(|w| {
            comps
                .iter()
                .filter(|u| subword_leq(u, w, &h))
                .map(move |u| (u, w))
        })
        .collect();
    let results: Vec<Result<Option<Failure>>> = pairs
        .par_iter()
        .map(|&(u, w)| {
            let (s, p) = (composition_to_layered(u), composition_to_layered(w));
            let pm = pattern_mobius(&s, &p)?;
            let cm = mobius_formula(u, w, &h)?;
            Ok((pm != cm).then(|| {
                (
                    key(u, w),
                    format!(
                        "[{}, {}] -> [{s}, {p}]: pattern {pm}, composition {cm}",
                        u.display(&h),
                        w.display(&h)
                    ),
                )
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(SweepOutcome::new("layered", pairs.len(), failures))
}

/// Factor-order Möbius values stay in `{-1, 0, 1}` for every pair `u ≤ w`
/// with `|w| ≤ max_len`.
pub fn factor_range_sweep(p: &Poset, max_len: usize) -> Result<SweepOutcome> {
    let words = all_words(p, max_len);
    let results: Vec<Result<(usize, Vec<Failure>)>> = words
        .par_iter()
        .map(|w| {
            let lower = factor_interval(&Word::empty(), w, p)?;
            let mut bad = Vec::new();
            let mut n = 0;
            for u in lower.iter().filter(|u| factor_leq(u, w, p)) {
                n += 1;
                let mu = factor_mobius(u, w, p)?;
                if mu.abs() > 1 {
                    bad.push((
                        key(u, w),
                        format!("[{}, {}]: {mu}", u.display(p), w.display(p)),
                    ));
                }
            }
            Ok((n, bad))
        })
        .collect();
    let mut cases = 0;
    let mut failures = Vec::new();
    for r in results {
        let (n, bad) = r?;
        cases += n;
        failures.extend(bad);
    }
    Ok(SweepOutcome::new("factor range", cases, failures))
}

/// A row of the `Λ*` grid. For `i, j ≥ 2`, `recurrence` records whether
/// `μ(a^i, c^j) = 2μ(a^i, c^{j-1}) - μ(a^{i-1}, c^{j-1})` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridRow {
    #[serde(flatten)]
    pub check: LambdaCheck,
    pub recurrence: Option<bool>,
}

/// The conjecture on every `1 ≤ i ≤ j` with `i + j ≤ max_sum`.
pub fn chebyshev_grid(max_sum: usize) -> Result<Vec<GridRow>> {
    let cells: Vec<(usize, usize)> = (1..=max_sum)
        .flat_map(|i| (i..=max_sum.saturating_sub(i)).map(move |j| (i, j)))
        .collect();
    let checks: Vec<LambdaCheck> = cells
        .par_iter()
        .map(|&(i, j)| check_lambda_conjecture(i, j))
        .collect::<Result<_>>()?;
    let mu: HashMap<(usize, usize), i64> = checks.iter().map(|c| ((c.i, c.j), c.mu)).collect();
    // a^i is not below c^j when i > j, and μ vanishes off the order
    let value = |i: usize, j: usize| if i > j { 0 } else { mu[&(i, j)] };
    Ok(checks
        .into_iter()
        .map(|c| {
            let recurrence = (c.i >= 2 && c.j >= 2).then(|| {
                let a = value(c.i, c.j - 1);
                let b = value(c.i - 1, c.j - 1);
                c.mu == 2 * a - b
            });
            GridRow {
                check: c,
                recurrence,
            }
        })
        .collect())
}

/// Three small rooted forests used by the oracle sweep.
pub fn sample_forests() -> Vec<Poset> {
    let build =
        |els: &[&str], covers: &[(&str, &str)]| Poset::build(els, covers).expect("valid forest");
    vec![
        build(&["r", "a", "b"], &[("r", "a"), ("r", "b")]),
        build(&["r", "a", "b", "c"], &[("r", "a"), ("a", "b"), ("r", "c")]),
        build(&["r", "a", "s", "b"], &[("r", "a"), ("s", "b")]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::mobius_recurrence;

    #[test]
    fn universe_matches_pairwise_recurrence() {
        let p = Poset::chain(2).unwrap();
        let uni = Universe::new(&p, 3);
        for wi in 0..uni.len() {
            let w = &uni.words[wi];
            let values = uni.mobius_to(wi);
            assert_eq!(values.len(), uni.below[wi].len() + 1);
            for (vi, mu) in values {
                assert_eq!(mu, mobius_recurrence(&uni.words[vi], w, &p).unwrap());
            }
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[]), 1);
        assert_eq!(multinomial(&[0, 0]), 1);
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(multinomial(&[2, 1]), 3);
        assert_eq!(multinomial(&[2, 2, 0]), 6);
    }

    #[test]
    fn composition_counts() {
        // 2^n compositions of each n >= 1, plus the empty one
        assert_eq!(compositions(0).len(), 1);
        assert_eq!(compositions(4).len(), 1 + 1 + 2 + 4 + 8);
    }

    #[test]
    fn small_sweeps_pass() {
        let h = HatPoset::new(Poset::chain(2).unwrap());
        assert!(formula_sweep(&h, 3).unwrap().passed());
        assert!(involution_sweep(&h, 3).unwrap().passed());
        assert!(morse_sweep(2, 3).unwrap().passed());
        assert!(same_length_sweep(2, 3).unwrap().passed());
        assert!(layered_sweep(4).unwrap().passed());
        let ab = Poset::antichain(&["a", "b"]).unwrap();
        assert!(factor_range_sweep(&ab, 4).unwrap().passed());
        for f in sample_forests() {
            assert!(HatPoset::new(f).is_rooted_forest());
        }
    }

    #[test]
    fn grid_rows() {
        let rows = chebyshev_grid(4).unwrap();
        let cells: Vec<(usize, usize)> = rows.iter().map(|r| (r.check.i, r.check.j)).collect();
        assert_eq!(cells, vec![(1, 1), (1, 2), (1, 3), (2, 2)]);
        assert!(rows.iter().all(|r| r.check.equal));
        assert_eq!(rows[3].recurrence, Some(true));
    }
}
