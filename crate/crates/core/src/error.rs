use thiserror::Error;

/// Errors raised by the poset, word and Möbius machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("element name `{0}` is reserved for the adjoined bottom")]
    ReservedName(String),
    #[error("cover relation contains a cycle through `{0}`")]
    CycleDetected(String),
    #[error("cover pair ({lower}, {upper}) is implied by transitivity or repeated")]
    RedundantCover { lower: String, upper: String },
    #[error("a chain needs at least one element")]
    EmptyChain,
    #[error("poset is not a rooted forest: {0}")]
    NotRootedForest(String),
    #[error("poset is not an antichain")]
    NotAntichain,
    #[error("operation requires a chain poset (compositions)")]
    NotAChainPoset,
    #[error("{u} is not below {w}")]
    NotComparable { u: String, w: String },
    #[error("bottom and top of the interval coincide")]
    BottomEqualsTop,
    #[error("embedding {0} is not normal")]
    NotNormal(String),
    #[error("embedding {0} does not lie in the interval")]
    NotInInterval(String),
    #[error("two maximal chains share the label sequence {0}")]
    DuplicateLabelSequence(String),
    #[error("permutation {0} is not layered")]
    NotLayered(String),
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
