use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero vector has no divisibility index")]
    ZeroVector,
    #[error("not weight-positive: {0}")]
    NotWeightPositive(String),
    #[error("no weight vector found: {0}")]
    WeightSearch(String),
    #[error("scene: {0}")]
    Scene(String),
    #[error("path crosses a forbidden stratum: {0}")]
    Forbidden(String),
    #[error("on amoeba: min |f| = {min_abs:.3e} on the torus over x = {x:?}")]
    OnAmoeba { x: Vec<f64>, min_abs: f64 },
    #[error("inconclusive, refine N: {0}")]
    Inconclusive(String),
    #[error("unsupported torus dimension {0} (only 1 and 2 are supported)")]
    Dimension(usize),
    #[error("cycle: {0}")]
    Cycle(String),
    #[error("cycle is not normalized: {0}")]
    NotNormalized(String),
    #[error("boundary of a boundary is nonzero in degree {0}")]
    BoundarySquared(usize),
    #[error("wall: {0}")]
    Wall(String),
    #[error("open loop: {0}")]
    OpenLoop(String),
    #[error("gluing value not in the presented group: {0}")]
    Gluing(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
