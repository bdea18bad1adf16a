//! Generalized subword order on words over a finite poset.
//!
//! The crate computes Möbius functions of intervals in `P*` three ways (the
//! defining recurrence, the signed count of normal embeddings for rooted
//! forests, and the antichain closed form), runs and checks the
//! sign-reversing involution on normal embeddings, and builds the discrete
//! Morse matching on the order complex of composition intervals whose critical
//! chains correspond to normal embeddings.
//!
//! ```
//! use compmu_core::{mobius_formula, mobius_recurrence, parse_word, HatPoset, Poset};
//!
//! let p = HatPoset::new(Poset::chain(3).unwrap());
//! let u = parse_word("21113", &p).unwrap();
//! let w = parse_word("2211133", &p).unwrap();
//! assert_eq!(mobius_formula(&u, &w, &p).unwrap(), 2);
//! assert_eq!(mobius_recurrence(&u, &w, &p).unwrap(), 2);
//! ```

pub mod error;
pub mod extras;
pub mod involution;
pub mod morse;
pub mod order;
pub mod poset;
pub mod report;
pub mod sweep;
pub mod words;

pub use error::{Error, Result};
pub use order::{
    down_set, interval, maximal_chains, mobius_antichain, mobius_formula, mobius_from_top,
    mobius_recurrence, subword_leq, Interval, MaximalChain,
};
pub use poset::{Elem, HatPoset, Poset, PosetFile, PosetKind, Slot};
pub use report::{Check, VerificationReport};
pub use words::{
    all_embeddings, all_words, defect, is_normal, normal_embeddings, parse_expansion, parse_word,
    rightmost_embedding, runs, zero_defect, Embedding, Expansion, Run, Word,
};
