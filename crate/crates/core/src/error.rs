use thiserror::Error;

/// Errors produced anywhere in the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bi or Bi′ is not representable at this argument.
    #[error("Airy function Bi overflows at a = {a}")]
    AiryOverflow { a: f64 },

    /// The combination Ai + tBi vanishes, so its log-derivative has a pole.
    #[error("log-derivative pole: Ai + t·Bi vanishes near a = {a}")]
    Pole { a: f64 },

    /// Q′(r) = 0; the coefficients a(r), b1(r), b2(r) are singular here.
    #[error("stationary point of Q at r = {r}")]
    StationaryPoint { r: f64 },

    #[error("radius {r} is outside the admissible domain ({reason})")]
    InvalidRadius { r: f64, reason: &'static str },

    /// The requested energy does not lie above the minimum of the effective potential.
    #[error("energy {energy} does not exceed the effective-potential minimum {minimum}")]
    DegenerateWell { energy: f64, minimum: f64 },

    #[error("invalid problem setup: {0}")]
    InvalidSetup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The boundary quadratic for t has no real root.
    #[error("no real boundary-matching root for l = {l}")]
    NoRealRoot { l: u32 },

    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    #[error("quadrature tolerance not met: value {value}, error estimate {err_est}")]
    ToleranceNotMet { value: f64, err_est: f64 },

    #[error("root bracket could not be established: {0}")]
    BracketFailure(String),

    /// Halving the Numerov step changed the energy by more than the allowed amount.
    #[error("grid too coarse: relative energy change {change:e}; try step {suggested_step:e}")]
    GridTooCoarse { change: f64, suggested_step: f64 },

    #[error("function has zero norm")]
    ZeroNorm,

    /// `HΨ` grows like `r^power` at the origin, too fast for `⟨H²⟩` to exist.
    #[error("HΨ ~ r^{power:.3} at the origin is not square integrable")]
    NotSquareIntegrable { power: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
