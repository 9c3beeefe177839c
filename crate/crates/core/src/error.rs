use thiserror::Error;

/// Which coordinate edge of the triangle a boundary restriction came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Xy,
    Yz,
    Zx,
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Edge::Xy => "xy",
            Edge::Yz => "yz",
            Edge::Zx => "zx",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("boundary sequence `{0}` is not weakly decreasing")]
    NotDecreasing(&'static str),
    #[error("input is not a hive ({violated} violated rhombi)")]
    NotAHive { violated: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix `{0}` is not positive definite")]
    NotPositiveDefinite(String),
    #[error("matrix `{0}` is not invertible")]
    NotInvertible(String),
    #[error("ABC deviates from the identity by {deviation:e}")]
    ProductNotIdentity { deviation: f64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("restriction to the {edge} edge has {real} real positive roots, expected {expected}")]
    NonRealEdgeRoots { edge: Edge, real: usize, expected: usize },
    #[error("coefficient at ({i},{j},{k}) is not positive")]
    NonpositiveCoefficient { i: usize, j: usize, k: usize },
    #[error("subdivision is not a triangulation")]
    NotATriangulation,
    #[error("consecutive path vertices {0} and {1} are not joined by a subdivision edge")]
    NotAPath(String, String),
    #[error("curve segment ends at an unmatched midpoint: {0}")]
    DanglingSegment(String),
    #[error("ray pattern is not dual to a hive: {0}")]
    NotHiveDual(String),
    #[error("corner coefficient at ({i},{j},{k}) is zero")]
    CornerCoefficientZero { i: usize, j: usize, k: usize },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
