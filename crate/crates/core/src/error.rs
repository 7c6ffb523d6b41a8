use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("energy {energy} is not above the potential minimum {floor}")]
    BelowPotentialMinimum { energy: f64, floor: f64 },

    #[error("energy {energy} lies on a seam (E = 0 or E = v0); use the seam conditions")]
    SeamEnergy { energy: f64 },

    #[error("position {x} outside [-{a}, {a}]")]
    OutOfDomain { x: f64, a: f64 },

    #[error("interval [{lo}, {hi}] does not bracket a sign change")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("root refinement did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("matching system at E = {energy} has no null vector (relative residual {residual:e})")]
    SpuriousRoot { energy: f64, residual: f64 },

    #[error("wavefunction has zero norm")]
    ZeroNorm,

    #[error("wavefunctions belong to different geometries")]
    GeometryMismatch,

    #[error("state {index} has {nodes} nodes; a state was missed in the energy interval [{lower}, {upper}]")]
    MissedState { index: usize, nodes: usize, lower: f64, upper: f64 },

    #[error("grid with {n} points is too small (minimum {min})")]
    GridTooSmall { n: usize, min: usize },

    #[error("invalid request: {0}")]
    InvalidRequest(String),
}
