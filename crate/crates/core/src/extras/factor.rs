//! The factor order: `u ≤ w` when some contiguous window of `w` dominates `u`
//! letter by letter. Over an antichain this is "u is a factor of w".

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::words::Word;

pub fn factor_leq(u: &Word, w: &Word, p: &Poset) -> bool {
    if u.is_empty() {
        return true;
    }
    u.len() <= w.len()
        && w.windows(u.len())
            .any(|win| u.iter().zip(win).all(|(&a, &b)| p.leq(a, b)))
}

/// Every `v` with `u ≤ v ≤ w` in the factor order, shortest first.
pub fn factor_interval(u: &Word, w: &Word, p: &Poset) -> Result<Vec<Word>> {
    if !factor_leq(u, w, p) {
        return Err(Error::NotComparable {
            u: u.display(p).to_string(),
            w: w.display(p).to_string(),
        });
    }
    let below: Vec<_> = p.elements().map(|x| p.down_set(x)).collect();
    let mut found = BTreeSet::new();
    for len in u.len()..=w.len() {
        for start in 0..=w.len() - len {
            let window = &w[start..start + len];
            let mut words = vec![Vec::with_capacity(len)];
            for x in window {
                words = words
                    .into_iter()
                    .flat_map(|pre| {
                        below[x.index()].iter().map(move |&y| {
                            let mut next = pre.clone();
                            next.push(y);
                            next
                        })
                    })
                    .collect();
            }
            for v in words {
                let v = Word(v);
                if factor_leq(u, &v, p) {
                    found.insert((v.len(), v.rank(p), v));
                }
            }
        }
    }
    Ok(found.into_iter().map(|(_, _, v)| v).collect())
}

/// `μ(u, w)` in the factor order, by the recurrence over the interval.
pub fn factor_mobius(u: &Word, w: &Word, p: &Poset) -> Result<i64> {
    let elements = factor_interval(u, w, p)?;
    let mut mu: Vec<i64> = Vec::with_capacity(elements.len());
    for (j, x) in elements.iter().enumerate() {
        let m = if j == 0 {
            1
        } else {
            -(0..j)
                .filter(|&i| factor_leq(&elements[i], x, p))
                .map(|i| mu[i])
                .sum::<i64>()
        };
        mu.push(m);
    }
    Ok(*mu.last().expect("interval holds u"))
}
