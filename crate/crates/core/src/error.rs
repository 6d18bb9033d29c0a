use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("closed-loop stiffness L + B*K_P is singular (det = {det:e}); no unique steady state")]
    SingularSteadyState { det: f64 },

    #[error("arc position {position} m is outside the path [0, {length}] m")]
    OutOfRange { position: f64, length: f64 },

    #[error("degenerate polyline: {0}")]
    DegeneratePolyline(&'static str),

    #[error("vehicle index {index} is invalid for a platoon record of {available} vehicles")]
    VehicleIndex { index: usize, available: usize },

    #[error("learned control is not available at l_d = {position} m")]
    LearnedUnavailable { position: f64 },

    #[error("grid mismatch: expected {expected} samples, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("communication delay exceeds the spatial time gap (margin {margin_s} s)")]
    DelayInfeasible { margin_s: f64 },

    #[error(
        "blow-up guard: vehicle {vehicle} reached |e_lat| = {e_lat:e} m at l_d = {position} m"
    )]
    BlowUp {
        vehicle: usize,
        position: f64,
        e_lat: f64,
    },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("denominator is not Hurwitz; the transfer function is unstable")]
    UnstableDenominator,

    #[error("H(s) has a right-half-plane zero; the sensitivity integral does not apply")]
    RhpZero,

    #[error("matrix is not numerically rank-deficient (sigma2/sigma1 = {ratio:e})")]
    NotRankDeficient { ratio: f64 },

    #[error("feedback gains do not stabilize the closed loop; retune K_P and K_D")]
    UnstableFeedback,

    #[error("sensitivity integral tail {tail:e} exceeds 1% of the integrated mass {mass:e}")]
    TailTooLarge { tail: f64, mass: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("empty signal")]
    EmptySignal,

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
