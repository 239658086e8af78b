use thiserror::Error;

use crate::tuples::Index;
use crate::value::{FinSet, Value};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} would hold {size} elements, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("expected a set of sets, found atom {0}")]
    NotASet(Value),
    #[error("the intersection of an empty family of sets is undefined")]
    EmptyFamily,
    #[error("invalid partition of {ground}: {reason}")]
    InvalidPartition { ground: FinSet, reason: String },
    #[error("partitions have different ground sets")]
    GroundMismatch,
    #[error("{0} is not a Kuratowski pair")]
    MalformedPair(FinSet),
    #[error("{0} is not a von Neumann numeral")]
    NotANumeral(FinSet),

    #[error("pair ({0}, {1}) escapes source × target")]
    PairOutOfRange(Value, Value),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("binary relation is not an endo-relation")]
    NotEndo,
    #[error("binary relation is not an equivalence")]
    NotEquivalence,
    #[error("binary relation is not functional (single-valued and total)")]
    NotFunctional,

    #[error("no table entry for source element {0}")]
    MissingEntry(Value),
    #[error("duplicate table entry for source element {0}")]
    DuplicateEntry(Value),
    #[error("table entry for {0} is not a source element")]
    StrayEntry(Value),
    #[error("value {0} is not in the target")]
    ValueOutsideTarget(Value),
    #[error("argument {0} is not in the source")]
    ArgumentOutsideSource(Value),
    #[error("{0} is not a subset of {1}")]
    NotSubset(FinSet, FinSet),
    #[error("functions disagree at {0}")]
    NotSummable(Value),
    #[error("operation requires a tabulated map")]
    RuleForm,
    #[error("function must be {0}")]
    PropertyRequired(&'static str),
    #[error("function has an empty source")]
    EmptySource,
    #[error("count overflows")]
    Overflow,

    #[error("duplicate index {0}")]
    DuplicateIndex(Index),
    #[error("tuple is not a sequence (indexes must be 0..n)")]
    NotASequence,
    #[error("atom {atom} of domain {tag} is not a member of domain {domain}")]
    ForeignMember {
        atom: String,
        tag: String,
        domain: String,
    },
    #[error("domain {0} is not enumerable")]
    IntensionalDomain(String),
    #[error("signatures are not summable at index {0}")]
    SignaturesNotSummable(Index),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("tuple {0} is not typed by the signature")]
    Untyped(String),
    #[error("index {0} is not in the index set")]
    UnknownIndex(Index),
    #[error("pattern index set differs from the relation's")]
    PatternMismatch,
    #[error("variable {0} is bound to indexes of different domains")]
    InconsistentPattern(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("unknown attribute {attribute} in {relation}")]
    UnknownAttribute { relation: String, attribute: String },
    #[error("{relation}: {message}")]
    BadAtom { relation: String, message: String },
    #[error("variable {variable} bound to both {first} and {second}")]
    VariableDomainConflict {
        variable: String,
        first: String,
        second: String,
    },
    #[error("unsafe rule: {0}")]
    Unsafe(String),
    #[error("scheme error: {0}")]
    Scheme(String),
    #[error("key {key:?} of {relation} is violated")]
    KeyViolation { relation: String, key: Vec<String> },
    #[error("at {line}:{column}: {error}")]
    Located {
        line: usize,
        column: usize,
        error: Box<Error>,
    },
}

impl Error {
    /// The error with any source position stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { error, .. } => error.root(),
            e => e,
        }
    }

    pub(crate) fn at(self, line: usize, column: usize) -> Error {
        match self {
            e @ (Error::Located { .. } | Error::Parse { .. }) => e,
            e => Error::Located {
                line,
                column,
                error: Box::new(e),
            },
        }
    }
}
