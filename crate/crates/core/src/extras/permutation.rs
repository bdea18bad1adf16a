//! Permutations under pattern containment, and layered permutations, which
//! correspond to compositions: the layer sizes read left to right.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poset::Elem;
use crate::words::Word;

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Permutation> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotPermutation(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The permutation order-isomorphic to `seq` (distinct values).
    pub fn flatten(seq: &[usize]) -> Permutation {
        let mut sorted: Vec<usize> = seq.to_vec();
        sorted.sort_unstable();
        Permutation(
            seq.iter()
                .map(|v| sorted.binary_search(v).expect("present") + 1)
                .collect(),
        )
    }

    /// Every permutation of `1..=n`, lexicographically.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    go(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        go(n, &mut cur, &mut used, &mut out);
        out
    }

    /// Distinct flattenings of all subsequences, including the empty one.
    pub fn patterns(&self) -> HashSet<Permutation> {
        let n = self.len();
        assert!(n < 32, "pattern enumeration is exponential");
        let mut out = HashSet::new();
        let mut buf = Vec::with_capacity(n);
        for mask in 0u32..1 << n {
            buf.clear();
            buf.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]));
            out.insert(Permutation::flatten(&buf));
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let sep = if self.len() <= 9 { "" } else { "," };
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Digit strings (`n ≤ 9`) or comma-separated integers.
    fn from_str(text: &str) -> Result<Permutation> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Permutation(Vec::new()));
        }
        let bad = || Error::Parse(format!("not a permutation: `{text}`"));
        let values: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// `s ⊕ p`: `s` followed by `p` shifted up by `|s|`.
pub fn direct_sum(s: &Permutation, p: &Permutation) -> Permutation {
    let k = s.len();
    Permutation(
        s.0.iter()
            .copied()
            .chain(p.0.iter().map(|v| v + k))
            .collect(),
    )
}

/// Some subsequence of `p` is order-isomorphic to `s`.
pub fn pattern_leq(s: &Permutation, p: &Permutation) -> bool {
    let (k, n) = (s.len(), p.len());
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<usize> = idx.iter().map(|&i| p.0[i]).collect();
        if Permutation::flatten(&sub) == *s {
            return true;
        }
        // next k-subset in lexicographic order
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return false;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Elements of the pattern interval `[s, p]`, shortest first.
pub fn pattern_interval(s: &Permutation, p: &Permutation) -> Result<Vec<Permutation>> {
    if !pattern_leq(s, p) {
        return Err(Error::NotComparable {
            u: s.to_string(),
            w: p.to_string(),
        });
    }
    let mut out: Vec<Permutation> = p
        .patterns()
        .into_iter()
        .filter(|x| pattern_leq(s, x))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// `μ(s, p)` in the pattern order, by the recurrence over `[s, p]`.
pub fn pattern_mobius(s: &Permutation, p: &Permutation) -> Result<i64> {
    let elements = pattern_interval(s, p)?;
    let mut mu: HashMap<&Permutation, i64> = HashMap::with_capacity(elements.len());
    for x in &elements {
        let m = if x == s {
            1
        } else {
            -x.patterns()
                .iter()
                .filter(|y| *y != x)
                .filter_map(|y| mu.get(y))
                .sum::<i64>()
        };
        mu.insert(x, m);
    }
    Ok(mu[p])
}

/// Direct sum of decreasing blocks; equivalently avoids 231 and 312.
pub fn is_layered(p: &Permutation) -> bool {
    layered_to_composition(p).is_ok()
}

/// Layer sizes of a layered permutation, as a composition (part `k` is the
/// chain letter `k`).
pub fn layered_to_composition(p: &Permutation) -> Result<Word> {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let top = p.0[i];
        let size = top - i;
        let block_ok = top > i && i + size <= p.len() && (0..size).all(|k| p.0[i + k] == top - k);
        if !block_ok {
            return Err(Error::NotLayered(p.to_string()));
        }
        parts.push(Elem((size - 1) as u16));
        i += size;
    }
    Ok(Word(parts))
}

/// The layered permutation with the given layer sizes.
pub fn composition_to_layered(c: &Word) -> Permutation {
    let mut out = Vec::new();
    for part in c.iter() {
        let size = part.index() + 1;
        let base = out.len();
        out.extend((1..=size).rev().map(|k| base + k));
    }
    Permutation(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_show() {
        assert_eq!(perm("31524").values(), &[3, 1, 5, 2, 4]);
        assert_eq!(perm("3,1,2"), perm("312"));
        assert_eq!(perm("").len(), 0);
        assert!(matches!(
            "122".parse::<Permutation>(),
            Err(Error::NotPermutation(_))
        ));
        assert!(matches!("1x".parse::<Permutation>(), Err(Error::Parse(_))));
        let big = Permutation::identity(10);
        assert_eq!(big.to_string(), "1,2,3,4,5,6,7,8,9,10");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
    }

    #[test]
    fn sums() {
        assert_eq!(direct_sum(&perm("132"), &perm("32145")), perm("13265478"));
        assert_eq!(direct_sum(&perm("1"), &perm("1")), perm("12"));
        assert_eq!(direct_sum(&perm(""), &perm("2413")), perm("2413"));
        let (a, b, c) = (perm("21"), perm("312"), perm("1"));
        assert_eq!(
            direct_sum(&direct_sum(&a, &b), &c),
            direct_sum(&a, &direct_sum(&b, &c))
        );
    }

    #[test]
    fn containment() {
        assert!(pattern_leq(&perm("312"), &perm("24153")));
        assert!(!pattern_leq(&perm("321"), &perm("2413")));
        assert!(pattern_leq(&perm(""), &perm("1")));
        assert_eq!(Permutation::flatten(&[4, 1, 3]), perm("312"));
    }

    #[test]
    fn mobius_values() {
        assert_eq!(pattern_mobius(&perm("1"), &perm("31524")).unwrap(), 6);
        assert_eq!(pattern_mobius(&perm("2413"), &perm("2413")).unwrap(), 1);
        // [1, 12] and [1, 21] are covers
        assert_eq!(pattern_mobius(&perm("1"), &perm("12")).unwrap(), -1);
        // [1, 123] is a chain of length 2
        assert_eq!(pattern_mobius(&perm("1"), &perm("123")).unwrap(), 0);
        // [1, 132] = {1, 12, 21, 132}
        assert_eq!(pattern_mobius(&perm("1"), &perm("132")).unwrap(), 1);
        assert!(matches!(
            pattern_mobius(&perm("21"), &perm("123")),
            Err(Error::NotComparable { .. })
        ));
    }

    #[test]
    fn layered() {
        let p = perm("13265478");
        let c = layered_to_composition(&p).unwrap();
        assert_eq!(
            c.iter().map(|e| e.index() + 1).collect::<Vec<_>>(),
            vec![1, 2, 3, 1, 1]
        );
        assert_eq!(composition_to_layered(&c), p);
        assert_eq!(
            layered_to_composition(&perm("321")).unwrap(),
            Word(vec![Elem(2)])
        );
        assert!(matches!(
            layered_to_composition(&perm("231")),
            Err(Error::NotLayered(_))
        ));
        assert_eq!(layered_to_composition(&perm("")).unwrap(), Word::empty());
    }

    #[test]
    fn layered_means_avoiding_231_and_312() {
        let (a, b) = (perm("231"), perm("312"));
        for n in 0..=6 {
            for p in Permutation::all(n) {
                let avoids = !pattern_leq(&a, &p) && !pattern_leq(&b, &p);
                assert_eq!(is_layered(&p), avoids, "{p}");
            }
        }
    }

    #[test]
    fn composition_round_trip() {
        for n in 0..=6usize {
            // compositions of n from the 2^(n-1) cut sets
            for cuts in 0u32..(1 << n.saturating_sub(1)) {
                if n == 0 && cuts > 0 {
                    continue;
                }
                let mut parts = Vec::new();
                let mut size = 1;
                for i in 0..n.saturating_sub(1) {
                    if cuts >> i & 1 == 1 {
                        parts.push(Elem(size - 1));
                        size = 0;
                    }
                    size += 1;
                }
                if n > 0 {
                    parts.push(Elem(size - 1));
                }
                let c = Word(parts);
                let p = composition_to_layered(&c);
                assert_eq!(p.len(), n);
                assert_eq!(layered_to_composition(&p).unwrap(), c);
            }
        }
    }
}
