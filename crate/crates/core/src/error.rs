use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {{{0}, {1}}} closes a cycle")]
    CycleDetected(usize, usize),
    #[error("edge {{{0}, {1}}} is listed twice")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("the graph has no edges")]
    NoEdges,
    #[error("domain error: {0}")]
    Domain(String),

    #[error("monomial has no variables")]
    EmptyMonomial,
    #[error("variable {0} repeated in a squarefree monomial")]
    NotSquarefree(usize),
    #[error("variable {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },

    #[error("support is not the edge set of a forest: {0}")]
    NotForestSupport(String),
    #[error("element {0} is an isolated summand")]
    IsolatedElement(usize),
    #[error("position {position} out of range for a system of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("the forest is not stretched")]
    NotStretched,
    #[error("not a subtree: {0}")]
    NotASubtree(String),
    #[error("replacement support differs from the replaced summands")]
    SupportMismatch,
    #[error("supports overlap")]
    OverlappingSupport,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid tree-like system: {0}")]
    InvalidSystem(String),

    #[error("{nvars} variables exceed the enumeration cap {cap} over F_{prime}")]
    CapExceeded { nvars: usize, cap: usize, prime: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("the complex is not minimal")]
    NotMinimal,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}
