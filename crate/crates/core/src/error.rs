use crate::graph::VertexId;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),

    #[error("edge ({u}, {v}) has an endpoint outside 0..{vertex_count}")]
    EdgeOutOfRange {
        u: VertexId,
        v: VertexId,
        vertex_count: usize,
    },

    #[error("unknown vertex {vertex} (graph has {vertex_count} vertices)")]
    UnknownVertex { vertex: VertexId, vertex_count: usize },

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(VertexId, VertexId),

    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    SizeCap { vertices: usize, cap: usize },

    #[error("level {level} is above the configured cap of {cap}")]
    LevelCap { level: u32, cap: u32 },

    #[error("level must be at least 1")]
    ZeroLevel,

    #[error("level {0} overflows the counting identities")]
    LevelOverflow(u32),

    #[error("view level {requested} exceeds the built level {built}")]
    ViewLevel { requested: u32, built: u32 },

    #[error("pins are invalid: {0}")]
    InvalidPins(String),

    #[error("base set is not strong in the graph; stuck on {stuck:?}")]
    NotStrong { stuck: Vec<VertexId> },

    #[error("glue maps do not induce the same structure: {0}")]
    GlueMismatch(String),

    #[error("amalgamation precondition failed: {0}")]
    AmalgamPrecondition(String),

    #[error("invalid model spec: {0}")]
    ModelSpec(String),

    #[error("vertex {x} is not connected to the parameter set")]
    Disconnected { x: VertexId },

    #[error("empty parameter set")]
    EmptySet,

    #[error("corpus instance {index} does not satisfy the base sequence")]
    CorpusInstance { index: usize },

    #[error("unknown cycle type {0:?}")]
    UnknownCycleType(String),

    #[error("invalid block tree: {0}")]
    BlockTree(String),
}
