use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by graph loading, classification, sampling and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("edge count mismatch: header declares {declared}, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("epsilon {0} outside (0, 1/2]")]
    EpsilonOutOfRange(f64),

    #[error("declared edge bound m_est = 0 on a graph with {m} edges")]
    ZeroEdgeBound { m: usize },

    #[error("exact sampler requires m_est = m (got m_est = {m_est}, m = {m})")]
    EdgeCountNotExact { m_est: usize, m: usize },

    #[error("no successful attempt within {0} attempts")]
    MaxAttemptsExceeded(u64),

    #[error("enumeration bound exceeded: {0}")]
    ResourceGuard(String),

    #[error("distribution support mismatch: {0}")]
    SupportMismatch(String),

    #[error("negative correction weight {weight} on directed edge ({u}, {v})")]
    NegativeCorrectionWeight { u: usize, v: usize, weight: f64 },

    #[error("random_edge source requires full graph access")]
    FullAccessRequired,

    #[error("chi-square needs total count >= 10 * cells (got {total} over {cells} cells)")]
    LowOccupancy { total: u64, cells: usize },
}
