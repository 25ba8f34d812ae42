use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice has no elements")]
    EmptyLattice,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cover relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("not a lattice: `{a}` and `{b}` have no {op}")]
    NotALattice { a: String, b: String, op: &'static str },
    #[error("size cap exceeded: {size} elements > cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not a congruence: {0}")]
    NotACongruence(String),
    #[error("subset is not spanning (missing a bound)")]
    NotSpanning,
    #[error("congruences live on different host lattices")]
    HostMismatch,
    #[error("congruence lattice is not Boolean")]
    ConNotBoolean,
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("not a sublattice: {0}")]
    NotASublattice(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("`{0}` is not subdirectly irreducible")]
    NotSubdirectlyIrreducible(String),
    #[error("empty chain set")]
    EmptyChainSet,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("restriction mismatch: {0}")]
    RestrictionMismatch(String),
    #[error("not a lower subset: {0}")]
    NotLowerSubset(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("bad chain shapes: {0}")]
    BadChainShapes(String),
    #[error("partial sublattice has {0} elements, at least five are required")]
    TooFewElements(usize),
    #[error("poset mismatch: {0}")]
    PosetMismatch(String),
    #[error("diagram does not commute: {0}")]
    NotCommutative(String),
    #[error("no direct congruence chain for `{0}`")]
    MissingDirectChain(String),
    #[error("verification failed in {section}: {detail}")]
    VerificationFailed { section: String, detail: String },
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
