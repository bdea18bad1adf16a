//! The sign-reversing involution on normal embeddings `η_vw`, `v ∈ [u, w]`.
//!
//! For `η_vw` let `ρ` be the rightmost embedding of `u` into `η_vw`, `s` the
//! first position where `ρ` and `w` differ, `k = w(s)` and `[r, t]` the run of
//! `k` containing `s`. Only position `s` changes:
//!
//! * `k` minimal: toggle between `k` and `0̂`;
//! * `s > r` and `ρ(s) = 0̂`: toggle between `k⁻` and `0̂`;
//! * otherwise: toggle between `k` and `k⁻`.
//!
//! Over a chain `k⁻ = k - 1` and the minimal letter is `1`; over a rooted
//! forest the parent map plays the role of `k - 1`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{interval, subword_leq};
use crate::poset::{Elem, HatPoset, Slot};
use crate::report::VerificationReport;
use crate::words::{
    defect, is_normal, normal_embeddings, rightmost_embedding, runs, Embedding, Expansion, Run,
    Word,
};

/// The data the step rule is read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionContext {
    pub rho: Expansion,
    /// 1-based.
    pub s: usize,
    pub k: Elem,
    pub run: Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `w(s)` minimal.
    MinimalLetter,
    /// `s` past the run head and `ρ(s) = 0̂`.
    ZeroToggle,
    /// `s` is the run head or `ρ(s) ≠ 0̂`.
    ParentToggle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub image: Embedding,
    pub rule: Rule,
    pub context: InvolutionContext,
}

fn validate(u: &Word, w: &Word, eta: &Embedding, h: &HatPoset) -> Result<()> {
    h.require_forest()?;
    if u == w {
        return Err(Error::BottomEqualsTop);
    }
    if &eta.target != w || !is_normal(eta, h)? {
        return Err(Error::NotNormal(eta.slots.display(h).to_string()));
    }
    if !subword_leq(u, &eta.source(), h) {
        return Err(Error::NotInInterval(eta.slots.display(h).to_string()));
    }
    Ok(())
}

pub fn context(u: &Word, eta: &Embedding, h: &HatPoset) -> Result<InvolutionContext> {
    let w = &eta.target;
    let rho = rightmost_embedding(u, &eta.slots, h)
        .ok_or_else(|| Error::NotInInterval(eta.slots.display(h).to_string()))?;
    let s = (0..w.len())
        .find(|&i| rho[i] != Some(w[i]))
        .ok_or(Error::BottomEqualsTop)?
        + 1;
    let run = runs(w)
        .into_iter()
        .find(|r| r.start <= s && s <= r.end)
        .expect("runs partition the positions");
    Ok(InvolutionContext {
        rho,
        s,
        k: w[s - 1],
        run,
    })
}

/// One application of the involution, with the rule used and its context.
pub fn step_detailed(u: &Word, w: &Word, eta: &Embedding, h: &HatPoset) -> Result<Step> {
    validate(u, w, eta, h)?;
    let ctx = context(u, eta, h)?;
    let k = ctx.k;
    let km: Slot = h.parent(k)?;
    let cur = eta.slots[ctx.s - 1];
    let undefined = || Error::NotNormal(eta.slots.display(h).to_string());

    let (rule, next) = if h.is_minimal(k) {
        let next = match cur {
            Some(x) if x == k => None,
            None => Some(k),
            _ => return Err(undefined()),
        };
        (Rule::MinimalLetter, next)
    } else if ctx.s > ctx.run.start && ctx.rho[ctx.s - 1].is_none() {
        let next = if cur.is_none() {
            km
        } else if cur == km {
            None
        } else {
            return Err(undefined());
        };
        (Rule::ZeroToggle, next)
    } else {
        let next = if cur == Some(k) {
            km
        } else if cur == km && cur.is_some() {
            Some(k)
        } else {
            return Err(undefined());
        };
        (Rule::ParentToggle, next)
    };

    let mut slots = eta.slots.clone();
    slots.0[ctx.s - 1] = next;
    Ok(Step {
        image: Embedding {
            slots,
            target: w.clone(),
        },
        rule,
        context: ctx,
    })
}

/// Maps a normal embedding `η_vw` (with `u ≤ v ≤ w`, `u ≠ w`) to its partner.
pub fn involution_step(u: &Word, w: &Word, eta: &Embedding, h: &HatPoset) -> Result<Embedding> {
    step_detailed(u, w, eta, h).map(|s| s.image)
}

fn sign(eta: &Embedding, h: &HatPoset) -> Result<i64> {
    Ok(if defect(eta, h)? % 2 == 0 { 1 } else { -1 })
}

/// All normal embeddings `η_vw` over `v ∈ [u, w]`.
pub fn interval_normal_embeddings(u: &Word, w: &Word, h: &HatPoset) -> Result<Vec<Embedding>> {
    let iv = interval(u, w, h)?;
    let mut all = Vec::new();
    for v in iv.elements() {
        all.extend(normal_embeddings(v, w, h)?);
    }
    Ok(all)
}

/// Runs the involution on every normal embedding of every `v ∈ [u, w]` and
/// checks it is a well-defined, fixed-point-free, sign-reversing involution
/// that keeps `ρ` fixed, so the signed total vanishes.
pub fn verify_involution(u: &Word, w: &Word, h: &HatPoset) -> Result<VerificationReport> {
    h.require_forest()?;
    if u == w {
        return Err(Error::BottomEqualsTop);
    }
    let all = interval_normal_embeddings(u, w, h)?;
    let members: HashSet<&Embedding> = all.iter().collect();
    let show = |e: &Embedding| e.slots.display(h).to_string();
    let mut report = VerificationReport::new(format!(
        "involution on [{}, {}]",
        u.display(h),
        w.display(h)
    ));

    let mut undefined = None;
    let mut escapes = None;
    let mut not_involutive = None;
    let mut fixed = None;
    let mut same_sign = None;
    let mut rho_moved = None;
    let mut total = 0i64;
    for eta in &all {
        total += sign(eta, h)?;
        let step = match step_detailed(u, w, eta, h) {
            Ok(s) => s,
            Err(e) => {
                undefined.get_or_insert_with(|| format!("{}: {e}", show(eta)));
                continue;
            }
        };
        let image = &step.image;
        if !members.contains(image) {
            escapes.get_or_insert_with(|| format!("{} -> {}", show(eta), show(image)));
            continue;
        }
        if image == eta {
            fixed.get_or_insert_with(|| show(eta));
        }
        if sign(image, h)? == sign(eta, h)? {
            same_sign.get_or_insert_with(|| format!("{} -> {}", show(eta), show(image)));
        }
        match step_detailed(u, w, image, h) {
            Ok(back) => {
                if &back.image != eta {
                    not_involutive.get_or_insert_with(|| {
                        format!("{} -> {} -> {}", show(eta), show(image), show(&back.image))
                    });
                }
                if back.context.rho != step.context.rho {
                    rho_moved.get_or_insert_with(|| format!("{} -> {}", show(eta), show(image)));
                }
            }
            Err(e) => {
                not_involutive.get_or_insert_with(|| format!("{}: {e}", show(image)));
            }
        }
    }

    let take = |o: Option<String>| move || o.unwrap_or_default();
    report.check("defined", undefined.is_none(), take(undefined.clone()));
    report.check(
        "stays in interval",
        escapes.is_none(),
        take(escapes.clone()),
    );
    report.check(
        "involution",
        not_involutive.is_none(),
        take(not_involutive.clone()),
    );
    report.check("fixed-point-free", fixed.is_none(), take(fixed.clone()));
    report.check(
        "sign-reversing",
        same_sign.is_none(),
        take(same_sign.clone()),
    );
    report.check("rho stable", rho_moved.is_none(), take(rho_moved.clone()));
    report.check("zero sum", total == 0, || format!("signed total {total}"));
    Ok(report)
}
