use thiserror::Error;

use crate::graph::{Capacity, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex {vertex} declared Steiner twice")]
    DuplicateSteiner { vertex: Vertex },
    #[error("Steiner set has {count} vertices, need at least 2")]
    TooFewSteiner { count: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: Vertex },
    #[error("total capacity overflows the supported range")]
    CapacityOverflow,
    #[error("({u},{v}) is not an edge")]
    UnknownEdge { u: Vertex, v: Vertex },
    #[error("cut side must be a nonempty proper subset of V")]
    ImproperSide,
    #[error("delta {delta} out of range [0, {w}]")]
    DeltaOutOfRange { delta: Capacity, w: Capacity },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: record before `p` header")]
    MissingHeader { line: usize },
    #[error("line {line}: vertex {vertex} already declared Steiner on line {first_line}")]
    DuplicateSteiner {
        line: usize,
        vertex: Vertex,
        first_line: usize,
    },
    #[error("Steiner set has {count} vertices, need at least 2")]
    TooFewSteiner { count: usize },
    #[error("line {line}: negative capacity {value}")]
    NegativeCapacity { line: usize, value: String },
    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: header declares {declared} edges, found {found}")]
    EdgeCount {
        line: usize,
        declared: usize,
        found: usize,
    },
    #[error(transparent)]
    Invalid(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("source and sink sets must both be nonempty")]
    EmptyTerminals,
    #[error("vertex {vertex} is both a source and a sink")]
    Overlap { vertex: Vertex },
    #[error("terminal {vertex} out of range for {n} nodes")]
    OutOfRange { vertex: Vertex, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminarError {
    #[error("family members {first:?} and {second:?} cross")]
    Crossing {
        first: Vec<Vertex>,
        second: Vec<Vertex>,
    },
    #[error("family member contains vertex {vertex} outside the universe of size {n}")]
    OutsideUniverse { vertex: Vertex, n: usize },
    #[error("empty set in laminar family")]
    EmptyMember,
    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Laminar(#[from] LaminarError),
    #[error("edge ({u},{v}) is not Type-3")]
    NotType3 { u: Vertex, v: Vertex },
    #[error("edge ({u},{v}) is not vital")]
    NotVital { u: Vertex, v: Vertex },
    #[error("nearest mincut for ({u},{v}) is not unique")]
    NearestNotUnique { u: Vertex, v: Vertex },
    #[error("edge ({u},{v}) is not covered by this tree")]
    NotCovered { u: Vertex, v: Vertex },
    #[error("query endpoints must differ")]
    SameVertex,
    #[error("operation requires S = V")]
    NotGlobal,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid generator input: {0}")]
    Generator(String),
    #[error("n={n} exceeds the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("not an oracle file: expected header {expected:?}")]
    BadMagic { expected: String },
    #[error("oracle format version {found} is not supported (expected {expected})")]
    Version { found: String, expected: u32 },
    #[error("corrupt oracle payload: {0}")]
    Payload(#[from] serde_json::Error),
    #[error("inconsistent oracle: {0}")]
    Inconsistent(String),
}
