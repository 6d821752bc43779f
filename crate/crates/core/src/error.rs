use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} outside supported range 1..={1}")]
    DimensionOutOfRange(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("bit pattern {bits:#x} does not fit in {dim} coordinates")]
    BitsOutOfRange { bits: u32, dim: usize },
    #[error("invalid bitstring {0:?}: expected 1 to 24 characters from {{0,1}}")]
    BadBitstring(String),
    #[error("crossover {picks:#x} has cardinality {got}, arity {arity} requires {want}")]
    UnbalancedCrossover { picks: u32, arity: usize, got: usize, want: String },
    #[error("crossover picks {picks:#x} exceed arity {arity}")]
    PicksOutOfRange { picks: u32, arity: usize },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("density {0} outside (0, 1]")]
    BadDensity(f64),
    #[error("metric returned a negative or non-finite value {value} between support points")]
    BadMetric { value: f64 },
    #[error("exact transport requires an integer-valued metric, got {0}")]
    NonIntegerMetric(f64),
    #[error("mass scaling overflow: common denominator exceeds i128")]
    ScaleOverflow,
    #[error("coupling marginals do not match: {0}")]
    MarginalMismatch(String),
    #[error("graph line {line}: {msg}")]
    GraphFormat { line: usize, msg: String },
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} does not appear in any edge")]
    MissingVertex(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} outside graph of order {1}")]
    VertexOutOfRange(usize, usize),
    #[error("ambient measure vanishes on the ball around vertex {0}")]
    EmptyBall(usize),
    #[error("function is not {constant}-Lipschitz: |f({i}) - f({j})| = {diff} over distance {dist}")]
    NotLipschitz { i: usize, j: usize, diff: f64, dist: u32, constant: f64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
