use thiserror::Error;

pub type Result<T> = std::result::Result<T, AcxError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcxError {
    #[error("zero span")]
    ZeroSpan,
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not complementary: subspaces intersect nontrivially")]
    NotComplementary,
    #[error("not an almost complex structure (|J^2 + I| = {residual:e})")]
    NotAlmostComplex { residual: f64 },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("chart domain violated: {0}")]
    ChartDomain(String),
    #[error("singular matrix (numerical rank {rank} < {expected})")]
    Singular { rank: usize, expected: usize },
    #[error("vector not in the distribution (residual {residual:e})")]
    NotInDistribution { residual: f64 },
    #[error("vector not tangent to S^6 (residual {residual:e})")]
    NotTangent { residual: f64 },
    #[error("not a point of S^6 (residual {residual:e})")]
    NotOnSphere { residual: f64 },
    #[error("degenerate lift (rank {rank}, expected {expected})")]
    DegenerateLift { rank: usize, expected: usize },
    #[error("subspace is not a graph over the given domain: {0}")]
    NotAGraph(String),
    #[error("rank {rank} too large for root expansion (cap {cap})")]
    RankTooLarge { rank: usize, cap: usize },
    #[error("truncation degree mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
}
