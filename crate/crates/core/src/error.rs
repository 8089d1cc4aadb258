use thiserror::Error;

/// Errors raised by the simulator and its verification helpers.
#[derive(Debug, Error)]
pub enum PeskinError {
    #[error("invalid filament: {0}")]
    InvalidFilament(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coincident points: source and target both at ({x}, {y})")]
    CoincidentPoints { x: f64, y: f64 },
    #[error("degenerate chord of zero length from node {from} to node {to}")]
    DegenerateChord { from: usize, to: usize },
    #[error("self-intersection between nodes {k} and {l}")]
    SelfIntersection { k: usize, l: usize },
    #[error("degenerate reflected pair between nodes {k} and {l}")]
    DegenerateReflectedPair { k: usize, l: usize },
    #[error("geometry violation at step {step}: {invariant} = {value:.6e}")]
    GeometryViolation {
        step: usize,
        invariant: String,
        value: f64,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PeskinError>;
