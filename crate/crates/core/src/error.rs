use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) leaves the vertex range 0..{vertex_count}")]
    VertexOutOfRange { u: usize, v: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(usize, usize),
    #[error("missing `wmgraph v1 n=<n>` header")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    BadHeader(String),
    #[error("line {line}: expected `<u> <v>`, found `{content}`")]
    BadLine { line: usize, content: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("keys must be positive integers")]
    NonPositiveKey,
    #[error("expected {expected} edges for a watermark with n = {n}, found {found}")]
    EdgeCount { n: usize, expected: usize, found: usize },
    #[error("vertex count {0} is not of the form 2n + 3")]
    VertexCount(usize),
    #[error("malformed watermark: {0}")]
    Malformed(String),
    #[error("not a canonical reducible permutation graph: {0}")]
    Recognition(#[from] Rejection),
}

/// Why a sequence could not be turned into a representative tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("empty traversal")]
    Empty,
    #[error("traversal is not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("vertex {vertex} has no ancestor larger than itself")]
    NoLargerAncestor { vertex: usize },
    #[error("vertex {child} is not smaller than its parent {parent}")]
    NotDescending { child: usize, parent: usize },
    #[error("vertex {0} is not reachable from the root")]
    Unreachable(usize),
}

/// A structured reason why a digraph is not a canonical reducible
/// permutation graph. The first failing clause is reported.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("{0} vertices is not 2n + 3 for any n >= 1")]
    SizeMismatch(usize),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("no Hamiltonian path: {0}")]
    NoHamiltonianPath(String),
    #[error("Hamiltonian path is not unique: vertex at label {label} has several unvisited predecessors")]
    AmbiguousPath { label: usize },
    #[error("degree condition violated at label {label}: {detail}")]
    DegreeViolation { label: usize, detail: String },
    #[error("representative tree: {0}")]
    Tree(#[from] TreeError),
    #[error("representative tree is neither type-1 nor type-2: {0}")]
    NotCanonical(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("edge ({0}, {1}) is not in the target graph")]
    RemovalNotPresent(usize, usize),
    #[error("edge ({0}, {1}) is already in the target graph")]
    InsertionPresent(usize, usize),
    #[error("insertion ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) leaves the vertex range")]
    OutOfRange(usize, usize),
    #[error("edge ({0}, {1}) listed twice")]
    Duplicate(usize, usize),
    #[error("attack magnitude {0} exceeds the supported bound of 5")]
    TooLarge(usize),
    #[error("attack space is empty")]
    EmptySpace,
    #[error("line {line}: expected `remove u v` or `insert u v`, found `{content}`")]
    BadLine { line: usize, content: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecoveryError {
    #[error("graph has {found} vertices but n = {n} requires {expected}")]
    SizeMismatch { n: usize, expected: usize, found: usize },
    #[error("edge delta {0} is outside the recoverable range")]
    OutOfContract(i64),
    #[error("graph is not a watermark with {0} missing edges")]
    NotRecoverable(usize),
    #[error("no modification set of the supported shapes turns the graph into a watermark")]
    NoExplanation,
    #[error("several distinct keys explain the damage: {0:?}")]
    MultipleExplanations(Vec<u64>),
    #[error("forest cannot be completed: {0}")]
    InconsistentForest(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("at least 100 samples per key size are needed, got {0}")]
    TooFewSamples(usize),
    #[error("key size {0} is outside 3..=64")]
    KeySize(usize),
}
