use alloc::string::String;

use crate::automaton::Acceptance;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity error at {line}:{column}: {message}")]
    Arity {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("case convention violated at {line}:{column}: {message}")]
    CaseConvention {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot normalize subformula `{0}`")]
    NormalizationFailure(String),
    #[error("unsupported term `{0}`: order atoms must use bare variables")]
    UnsupportedTerm(String),
    #[error("formula is outside the compilable fragment: {0}")]
    NotInFragment(String),
    #[error("variable `{0}` has no track in the signature")]
    UnmappedVariable(String),
    #[error("unbound first-order variable `{0}`")]
    UnboundVariable(String),
    #[error("second-order quantifier over `{0}` is not allowed here")]
    SecondOrderQuantifier(String),
    #[error("width mismatch: expected {expected} tracks, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("signature mismatch between operands")]
    SignatureMismatch,
    #[error("expected a {expected} automaton, found {found}")]
    WrongAcceptance { expected: Acceptance, found: Acceptance },
    #[error("automaton is not {0}")]
    NotDeterministic(&'static str),
    #[error("track {track} out of range for width {width}")]
    TrackOutOfRange { track: usize, width: usize },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid lasso: {0}")]
    InvalidLasso(String),
}
