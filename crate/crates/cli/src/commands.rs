use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};

use compmu_core::extras::{
    is_layered, layered_to_composition, pattern_interval, pattern_mobius, Permutation,
};
use compmu_core::morse::{morse_matching, ordered_chains, verify_morse_theorem};
use compmu_core::sweep::{
    chebyshev_grid, factor_range_sweep, formula_sweep, involution_sweep, layered_sweep,
    morse_sweep, same_length_sweep, sample_forests, GridRow, SweepOutcome,
};
use compmu_core::{
    interval, maximal_chains, mobius_antichain, mobius_formula, mobius_recurrence, parse_word,
    Error, HatPoset, Poset, VerificationReport, Word,
};

use crate::poset_spec::PosetSpec;
use crate::{Command, Method, Pair, Target};

/// What a command prints, in both forms, and its exit code.
pub struct Output {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

type Run = Result<Output, String>;

fn core(e: Error) -> String {
    e.to_string()
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Mobius { pair, method } => mobius(pair, *method),
        Command::Interval { pair, dot, chains } => show_interval(pair, dot.as_deref(), *chains),
        Command::Critical { pair } => critical(pair),
        Command::MorseVerify { pair } => morse_verify(pair),
        Command::Verify {
            target,
            poset,
            max_len,
            max_part,
            max_total,
        } => verify(*target, poset.as_ref(), *max_len, *max_part, *max_total),
        Command::Chebyshev { max_sum, csv } => chebyshev(*max_sum, *csv),
        Command::Perm { s, p } => perm(s, p),
    }
}

fn resolve(pair: &Pair) -> Result<(HatPoset, Word, Word), String> {
    let h = pair.poset.resolve(&[&pair.u, &pair.w])?;
    let u = parse_word(&pair.u, &h).map_err(core)?;
    let w = parse_word(&pair.w, &h).map_err(core)?;
    Ok((h, u, w))
}

fn show(w: &Word, h: &HatPoset) -> String {
    w.display(h).to_string()
}

fn mobius(pair: &Pair, method: Method) -> Run {
    let (h, u, w) = resolve(pair)?;
    let mut values: Vec<(&str, i64)> = Vec::new();
    let wanted = |m: Method| method == m || method == Method::All;
    if wanted(Method::Formula) && (method == Method::Formula || h.is_rooted_forest()) {
        values.push(("formula", mobius_formula(&u, &w, &h).map_err(core)?));
    }
    if wanted(Method::Recurrence) {
        values.push(("recurrence", mobius_recurrence(&u, &w, &h).map_err(core)?));
    }
    if wanted(Method::Antichain) && (method == Method::Antichain || h.is_antichain()) {
        values.push(("antichain", mobius_antichain(&u, &w, &h).map_err(core)?));
    }
    Ok(render_mobius(&show(&u, &h), &show(&w, &h), &values))
}

fn render_mobius(u: &str, w: &str, values: &[(&str, i64)]) -> Output {
    let agree = values.windows(2).all(|p| p[0].1 == p[1].1);
    let mut text = String::new();
    for (name, v) in values {
        writeln!(text, "{name}: {v}").unwrap();
    }
    if values.len() > 1 {
        writeln!(text, "{}", if agree { "agree" } else { "DISAGREE" }).unwrap();
    }
    let json = json!({
        "u": u,
        "w": w,
        "values": values.iter().map(|(n, v)| (n.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "agree": agree,
    });
    Output {
        code: if agree { 0 } else { 1 },
        text,
        json,
    }
}

fn show_interval(pair: &Pair, dot: Option<&std::path::Path>, chains: bool) -> Run {
    let (h, u, w) = resolve(pair)?;
    let iv = interval(&u, &w, &h).map_err(core)?;
    let mut text = String::new();
    let names: Vec<String> = iv.elements().iter().map(|v| show(v, &h)).collect();
    writeln!(text, "elements: {}", iv.len()).unwrap();
    writeln!(text, "{}", names.join(" ")).unwrap();
    writeln!(text, "covers: {}", iv.cover_pairs().len()).unwrap();
    if let Some(path) = dot {
        fs::write(path, iv.to_dot(&h)).map_err(|e| format!("{}: {e}", path.display()))?;
        writeln!(text, "dot: {}", path.display()).unwrap();
    }
    let mut json = json!({
        "u": show(&u, &h),
        "w": show(&w, &h),
        "elements": names,
        "covers": iv.cover_pairs().len(),
    });
    if chains {
        let mut rows = Vec::new();
        if h.is_chain() {
            for (k, c) in ordered_chains(&iv, &h).map_err(core)?.iter().enumerate() {
                let vs: Vec<String> = c.chain.vertices.iter().map(|v| show(v, &h)).collect();
                writeln!(text, "C{} {:?} {}", k + 1, c.labels, vs.join(" > ")).unwrap();
                rows.push(json!({ "labels": c.labels, "vertices": vs }));
            }
        } else {
            for (k, c) in maximal_chains(&iv).iter().enumerate() {
                let vs: Vec<String> = c.vertices.iter().map(|v| show(v, &h)).collect();
                writeln!(text, "C{} {}", k + 1, vs.join(" > ")).unwrap();
                rows.push(json!({ "vertices": vs }));
            }
        }
        writeln!(text, "chains: {}", rows.len()).unwrap();
        json["chains"] = Value::Array(rows);
    }
    Ok(Output {
        code: 0,
        text,
        json,
    })
}

fn ranges(intervals: &[compmu_core::morse::ChainInterval]) -> String {
    let parts: Vec<String> = intervals.iter().map(ToString::to_string).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

fn critical(pair: &Pair) -> Run {
    let (h, u, w) = resolve(pair)?;
    let report = morse_matching(&u, &w, &h).map_err(core)?;
    let mut text = String::new();
    writeln!(text, "chain\tlabels\tmsis\tj-intervals\tcritical\tdim").unwrap();
    let mut rows = Vec::new();
    for c in &report.chains {
        let dim = c.dimension();
        writeln!(
            text,
            "C{}\t{:?}\t{}\t{}\t{}\t{}",
            c.index + 1,
            c.chain.labels,
            ranges(&c.msis),
            ranges(&c.j_intervals),
            if c.is_critical() { "yes" } else { "no" },
            dim.map_or("-".into(), |d| d.to_string())
        )
        .unwrap();
        let cell: Option<Vec<String>> = c
            .critical_cell()
            .map(|f| c.face_words(f).iter().map(|v| show(v, &h)).collect());
        rows.push(json!({
            "chain": c.index + 1,
            "labels": c.chain.labels,
            "msis": c.msis.iter().map(|i| [i.lo, i.hi]).collect::<Vec<_>>(),
            "j_intervals": c.j_intervals.iter().map(|i| [i.lo, i.hi]).collect::<Vec<_>>(),
            "critical": c.is_critical(),
            "dim": dim,
            "cell": cell,
        }));
    }
    let counts: Vec<String> = report
        .critical_counts
        .iter()
        .map(|(d, n)| format!("dim {d}: {n}"))
        .collect();
    writeln!(text, "critical cells: {}", counts.join(", ")).unwrap();
    writeln!(text, "euler: {}", report.euler).unwrap();
    let json = json!({
        "u": show(&u, &h),
        "w": show(&w, &h),
        "chains": rows,
        "critical_counts": report.critical_counts.iter().map(|(d, n)| (d.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
        "euler": report.euler,
    });
    Ok(Output {
        code: 0,
        text,
        json,
    })
}

fn report_text(r: &VerificationReport) -> String {
    let mut text = format!("{}\n", r.subject);
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        match &c.witness {
            Some(w) if !c.passed => writeln!(text, "  {mark} {} ({w})", c.name).unwrap(),
            _ => writeln!(text, "  {mark} {}", c.name).unwrap(),
        }
    }
    text
}

fn morse_verify(pair: &Pair) -> Run {
    let (h, u, w) = resolve(pair)?;
    let r = verify_morse_theorem(&u, &w, &h).map_err(core)?;
    Ok(render_report(&r))
}

fn render_report(r: &VerificationReport) -> Output {
    Output {
        code: if r.passed() { 0 } else { 1 },
        text: report_text(r),
        json: serde_json::to_value(r).expect("serializable"),
    }
}

fn sized(spec: Option<&PosetSpec>, default: &str) -> Result<HatPoset, String> {
    let spec = match spec {
        Some(s) => s.clone(),
        None => default.parse()?,
    };
    if spec == PosetSpec::Chain(None) {
        return Err("verify needs a sized chain, e.g. chain:3".into());
    }
    spec.resolve(&[])
}

fn chain_size(
    spec: Option<&PosetSpec>,
    max_part: Option<usize>,
    default: usize,
) -> Result<usize, String> {
    match (spec, max_part) {
        (Some(PosetSpec::Chain(Some(n))), None) => Ok(*n),
        (Some(PosetSpec::Chain(Some(n))), Some(m)) if *n != m => {
            Err(format!("--poset chain:{n} conflicts with --max-part {m}"))
        }
        (Some(PosetSpec::Chain(_)) | None, m) => Ok(m.unwrap_or(default)),
        (Some(other), _) => Err(format!("this sweep runs over chains, not {other:?}")),
    }
}

fn sweeps(
    target: Target,
    poset: Option<&PosetSpec>,
    max_len: Option<usize>,
    max_part: Option<usize>,
    max_total: Option<usize>,
) -> Result<Vec<SweepOutcome>, String> {
    Ok(match target {
        Target::Formula => match poset {
            Some(_) => vec![formula_sweep(&sized(poset, "")?, max_len.unwrap_or(5)).map_err(core)?],
            None => {
                let mut v = vec![
                    formula_sweep(&sized(None, "chain:4")?, max_len.unwrap_or(5)).map_err(core)?,
                    formula_sweep(&sized(None, "antichain:a,b")?, max_len.unwrap_or(6))
                        .map_err(core)?,
                ];
                for f in sample_forests() {
                    v.push(formula_sweep(&HatPoset::new(f), max_len.unwrap_or(4)).map_err(core)?);
                }
                v
            }
        },
        Target::Involution => {
            vec![involution_sweep(&sized(poset, "chain:3")?, max_len.unwrap_or(4)).map_err(core)?]
        }
        Target::Morse => {
            let n = chain_size(poset, max_part, 3)?;
            vec![morse_sweep(n, max_len.unwrap_or(4)).map_err(core)?]
        }
        Target::Samelength => {
            let n = chain_size(poset, max_part, 3)?;
            vec![same_length_sweep(n, max_len.unwrap_or(4)).map_err(core)?]
        }
        Target::Layered => vec![layered_sweep(max_total.unwrap_or(7)).map_err(core)?],
        Target::FactorRange => {
            let p = sized(poset, "antichain:a,b")?;
            vec![factor_range_sweep(&p, max_len.unwrap_or(6)).map_err(core)?]
        }
        Target::All => {
            let mut v = Vec::new();
            for t in [
                Target::Formula,
                Target::Involution,
                Target::Morse,
                Target::Samelength,
                Target::Layered,
                Target::FactorRange,
            ] {
                v.extend(sweeps(t, None, None, None, None)?);
            }
            v
        }
    })
}

/// Failures shown per sweep in text mode; JSON lists all of them.
const SHOWN_FAILURES: usize = 10;

fn verify(
    target: Target,
    poset: Option<&PosetSpec>,
    max_len: Option<usize>,
    max_part: Option<usize>,
    max_total: Option<usize>,
) -> Run {
    if target == Target::All
        && (poset.is_some() || max_len.is_some() || max_part.is_some() || max_total.is_some())
    {
        return Err("`verify all` runs the default sizes and takes no bounds".into());
    }
    let outcomes = sweeps(target, poset, max_len, max_part, max_total)?;
    Ok(render_sweeps(&outcomes))
}

fn render_sweeps(outcomes: &[SweepOutcome]) -> Output {
    let ok = outcomes.iter().all(SweepOutcome::passed);
    let mut text = String::new();
    for o in outcomes {
        let verdict = if o.passed() { "PASS" } else { "FAIL" };
        writeln!(
            text,
            "{verdict} {}: {} cases, {} failures",
            o.name,
            o.cases,
            o.failures.len()
        )
        .unwrap();
        for f in o.failures.iter().take(SHOWN_FAILURES) {
            writeln!(text, "  {f}").unwrap();
        }
    }
    Output {
        code: if ok { 0 } else { 1 },
        text,
        json: json!({ "passed": ok, "sweeps": outcomes }),
    }
}

fn chebyshev(max_sum: usize, csv: bool) -> Run {
    let rows = chebyshev_grid(max_sum).map_err(core)?;
    Ok(render_grid(&rows, csv))
}

fn render_grid(rows: &[GridRow], csv: bool) -> Output {
    let ok = rows.iter().all(|r| r.check.equal);
    let mut text = String::new();
    let rec = |r: Option<bool>| r.map_or("", |b| if b { "yes" } else { "no" });
    if csv {
        writeln!(text, "i,j,mu,coeff,match,recurrence").unwrap();
        for r in rows {
            let c = r.check;
            writeln!(
                text,
                "{},{},{},{},{},{}",
                c.i,
                c.j,
                c.mu,
                c.coeff,
                c.equal,
                rec(r.recurrence)
            )
            .unwrap();
        }
    } else {
        writeln!(text, "i\tj\tmu\tcoeff\tmatch\trecurrence").unwrap();
        for r in rows {
            let c = r.check;
            let verdict = if c.equal {
                "conjecture holds"
            } else {
                "conjecture fails"
            };
            writeln!(
                text,
                "{}\t{}\t{}\t{}\t{verdict}\t{}",
                c.i,
                c.j,
                c.mu,
                c.coeff,
                rec(r.recurrence)
            )
            .unwrap();
        }
    }
    Output {
        code: if ok { 0 } else { 1 },
        text,
        json: json!({ "all_match": ok, "rows": rows }),
    }
}

fn perm(s: &str, p: &str) -> Run {
    let s: Permutation = s.parse().map_err(core)?;
    let p: Permutation = p.parse().map_err(core)?;
    let mu = pattern_mobius(&s, &p).map_err(core)?;
    let size = pattern_interval(&s, &p).map_err(core)?.len();
    let mut text = format!("mu: {mu}\ninterval size: {size}\n");
    let mut json =
        json!({ "s": s.to_string(), "p": p.to_string(), "mu": mu, "interval_size": size });
    let mut code = 0;
    if is_layered(&s) && is_layered(&p) {
        let (u, w) = (
            layered_to_composition(&s).map_err(core)?,
            layered_to_composition(&p).map_err(core)?,
        );
        let h = HatPoset::new(Poset::chain(p.len().max(1)).map_err(core)?);
        let cm = mobius_formula(&u, &w, &h).map_err(core)?;
        let agree = cm == mu;
        writeln!(
            text,
            "layered: compositions {} <= {}, composition mu {cm}, {}",
            show(&u, &h),
            show(&w, &h),
            if agree { "agree" } else { "DISAGREE" }
        )
        .unwrap();
        json["composition_mu"] = json!(cm);
        json["agree"] = json!(agree);
        if !agree {
            code = 1;
        }
    }
    Ok(Output { code, text, json })
}

#[cfg(test)]
mod tests {
    use super::*;
    use compmu_core::extras::LambdaCheck;

    #[test]
    fn disagreement_exits_one() {
        let out = render_mobius("1", "2", &[("formula", -1), ("recurrence", -1)]);
        assert_eq!(out.code, 0);
        let out = render_mobius("1", "2", &[("formula", -1), ("recurrence", 0)]);
        assert_eq!(out.code, 1);
        assert!(out.text.contains("DISAGREE"));
        assert_eq!(out.json["agree"], json!(false));
    }

    #[test]
    fn failed_check_exits_one() {
        let mut r = VerificationReport::new("forced");
        r.check("holds", true, String::new);
        assert_eq!(render_report(&r).code, 0);
        r.check("broken", false, || "witness".into());
        let out = render_report(&r);
        assert_eq!(out.code, 1);
        assert!(out.text.contains("FAIL broken (witness)"));
    }

    #[test]
    fn failed_sweep_exits_one() {
        let good = SweepOutcome {
            name: "a".into(),
            cases: 3,
            failures: vec![],
        };
        assert_eq!(render_sweeps(std::slice::from_ref(&good)).code, 0);
        let bad = SweepOutcome {
            name: "b".into(),
            cases: 3,
            failures: vec!["[1, 2]: 5".into()],
        };
        let out = render_sweeps(&[good, bad]);
        assert_eq!(out.code, 1);
        assert!(out.text.contains("FAIL b: 3 cases, 1 failures"));
        assert_eq!(out.json["passed"], json!(false));
    }

    #[test]
    fn conjecture_mismatch_exits_one() {
        let row = |equal| GridRow {
            check: LambdaCheck {
                i: 1,
                j: 1,
                mu: -1,
                coeff: if equal { -1 } else { 7 },
                equal,
            },
            recurrence: None,
        };
        assert_eq!(render_grid(&[row(true)], false).code, 0);
        let out = render_grid(&[row(true), row(false)], false);
        assert_eq!(out.code, 1);
        assert!(out.text.contains("conjecture fails"));
        let csv = render_grid(&[row(false)], true);
        assert_eq!(csv.text.lines().nth(1), Some("1,1,-1,7,false,"));
    }
}
