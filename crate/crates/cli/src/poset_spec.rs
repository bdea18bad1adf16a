//! `--poset` selectors: `chain[:n]`, `antichain:a,b,...`, `lambda`,
//! `file:<path>`.

use std::fs;

use compmu_core::{Error, HatPoset, Poset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetSpec {
    /// `None` sizes the chain to the largest letter in the input words.
    Chain(Option<usize>),
    Antichain(Vec<String>),
    Lambda,
    File(String),
}

impl std::str::FromStr for PosetSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<PosetSpec, String> {
        let (head, rest) = match text.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (text, None),
        };
        match (head, rest) {
            ("chain", None) => Ok(PosetSpec::Chain(None)),
            ("chain", Some(n)) => n
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .map(|n| PosetSpec::Chain(Some(n)))
                .ok_or_else(|| format!("bad chain size `{n}`")),
            ("antichain", Some(labels)) if !labels.is_empty() => Ok(PosetSpec::Antichain(
                labels.split(',').map(|s| s.trim().to_string()).collect(),
            )),
            ("lambda", None) => Ok(PosetSpec::Lambda),
            ("file", Some(path)) if !path.is_empty() => Ok(PosetSpec::File(path.to_string())),
            _ => Err(format!(
                "unknown poset `{text}`; expected chain[:n], antichain:a,b,..., lambda or file:<path>"
            )),
        }
    }
}

/// Largest positive integer among the letters of `words` (compact digits or
/// comma-separated).
fn max_letter(words: &[&str]) -> Result<usize, String> {
    let mut max = 1;
    for w in words {
        let w = w.trim();
        if w.is_empty() || w == "ε" {
            continue;
        }
        let tokens: Vec<String> = if w.contains(',') {
            w.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            w.chars().map(String::from).collect()
        };
        for t in tokens {
            let v: usize = t
                .parse()
                .map_err(|_| format!("`{t}` in `{w}` is not a positive integer"))?;
            if v == 0 {
                return Err(format!("`0` is not a letter of a composition (in `{w}`)"));
            }
            max = max.max(v);
        }
    }
    Ok(max)
}

impl PosetSpec {
    /// The poset, sized to `words` for an unsized chain.
    pub fn resolve(&self, words: &[&str]) -> Result<HatPoset, String> {
        let core = |e: Error| e.to_string();
        let p = match self {
            PosetSpec::Chain(Some(n)) => Poset::chain(*n).map_err(core)?,
            PosetSpec::Chain(None) => Poset::chain(max_letter(words)?).map_err(core)?,
            PosetSpec::Antichain(labels) => Poset::antichain(labels).map_err(core)?,
            PosetSpec::Lambda => Poset::lambda(),
            PosetSpec::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                Poset::from_json(&text).map_err(core)?
            }
        };
        Ok(HatPoset::new(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert_eq!("chain".parse(), Ok(PosetSpec::Chain(None)));
        assert_eq!("chain:4".parse(), Ok(PosetSpec::Chain(Some(4))));
        assert_eq!(
            "antichain:a,b".parse(),
            Ok(PosetSpec::Antichain(vec!["a".into(), "b".into()]))
        );
        assert_eq!("lambda".parse(), Ok(PosetSpec::Lambda));
        assert_eq!("file:p.json".parse(), Ok(PosetSpec::File("p.json".into())));
        assert!("chain:0".parse::<PosetSpec>().is_err());
        assert!("tree".parse::<PosetSpec>().is_err());
        assert!("antichain:".parse::<PosetSpec>().is_err());
    }

    #[test]
    fn auto_size() {
        let p = PosetSpec::Chain(None)
            .resolve(&["21113", "2211133"])
            .unwrap();
        assert_eq!(p.len(), 3);
        let p = PosetSpec::Chain(None).resolve(&["1,12", ""]).unwrap();
        assert_eq!(p.len(), 12);
        assert!(PosetSpec::Chain(None).resolve(&["a"]).is_err());
        assert!(PosetSpec::Chain(None).resolve(&["10"]).is_err());
    }
}
