use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("too many vertices: {actual} exceeds the limit of {limit}")]
    TooManyVertices { actual: usize, limit: usize },
    #[error("{what} expects {expected} weights, got {actual}")]
    WeightCount {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("negative weight on {what} edge {edge}")]
    NegativeWeight { what: &'static str, edge: usize },
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("{what} edge {edge} does not exist")]
    MissingEdge { what: &'static str, edge: usize },
    #[error("size guard exceeded for {what}: {actual} > {limit}")]
    SizeGuard {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("supply graph is disconnected")]
    Disconnected,
    #[error("supply graph is not biconnected (cut vertex {0})")]
    NotBiconnected(usize),
    #[error("demand {0} has endpoints in different components of the supply graph")]
    DemandDisconnected(usize),
    #[error("supply graph is not series-parallel")]
    NotSeriesParallel,
    #[error("({0}, {1}) is not a split pair")]
    InvalidSplitPair(usize, usize),
    #[error("pair ({0}, {1}) is compliant")]
    CompliantPair(usize, usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("metric inequality violated for demand {0}")]
    MetricViolation(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal failure: {0}")]
    Internal(String),
}
