//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by construction, validation, enumeration, and search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An element index is outside the ground set.
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: u32, n: usize },

    /// A parameter is outside its documented range.
    #[error("{what}: {value} outside allowed range {min}..={max}")]
    RangeViolation {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    /// An enumeration was requested beyond the configured bound.
    /// `span` and `models` stay available at any ground-set size.
    #[error(
        "{what} requires enumerating 2^{n} subsets, above the bound {cap}; \
         raise the bound (max {max}) or use span/models, which have no size limit"
    )]
    Capacity {
        what: &'static str,
        n: usize,
        cap: usize,
        max: usize,
    },

    /// A search exceeded its node budget. Carries the best bounds proven
    /// before the budget ran out.
    #[error("{what}: budget of {budget} nodes exhausted (bounds: {lower} <= answer <= {upper})")]
    Budget {
        what: &'static str,
        budget: u64,
        lower: usize,
        upper: usize,
    },

    /// A family tagged intersection-closed has two members whose
    /// intersection is missing.
    #[error("family is not intersection-closed: members {a:?} and {b:?} witness the failure")]
    NotIntersectionClosed { a: Vec<u32>, b: Vec<u32> },

    /// A family tagged union-closed has two members whose union is missing.
    #[error("family is not union-closed: members {a:?} and {b:?} witness the failure")]
    NotUnionClosed { a: Vec<u32>, b: Vec<u32> },

    /// The full ground set is missing from a family that must contain it.
    #[error("family does not contain the full ground set")]
    MissingFullSet,

    /// A family that must be nonempty is empty.
    #[error("{0} must be nonempty")]
    EmptyInput(&'static str),

    /// Ground sets of two arguments disagree.
    #[error("ground sets disagree: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },

    /// A code word has the wrong length or an out-of-range symbol.
    #[error("invalid code: {0}")]
    InvalidCode(String),

    /// A locally correctable instance failed validation.
    #[error("invalid correction instance: {0}")]
    InvalidLcs(String),

    /// A randomized procedure exhausted its retries. `detail` reports the
    /// best attempt seen.
    #[error("{what}: no attempt out of {attempts} succeeded ({detail})")]
    RetriesExhausted {
        what: &'static str,
        attempts: u32,
        detail: String,
    },

    /// A linear program was infeasible or unbounded where a finite optimum
    /// was required.
    #[error("linear program: {0}")]
    Lp(#[from] crate::lp::LpError),

    /// A text document failed to parse. Lines are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An underlying I/O operation failed.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
