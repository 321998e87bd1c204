use thiserror::Error;

/// Failure modes shared by the geometry, line-space and quadrature modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spanning directions are linearly dependent")]
    DependentSpan,
    #[error("plane is degenerate ({0})")]
    DegeneratePlane(&'static str),
    #[error("points {0} and {1} are null-separated")]
    NotSkew(usize, usize),
    #[error("points are collinear")]
    CollinearPoints,
    #[error("square radius is zero")]
    ZeroRadius,
    #[error("no real points: square radius has the wrong sign for a {0} plane")]
    EmptyConic(&'static str),
    #[error("could not complete a pseudo-orthonormal frame")]
    FrameCompletionFailure,
    #[error("point is a pole of generator {stage}")]
    PoleAt { stage: usize },
    #[error("conformal map has a pole on the integration curve at parameter {parameter}")]
    PoleOnCurve { parameter: f64 },
    #[error("line lies outside the chart (|xi| = {modulus})")]
    OutOfChart { modulus: f64 },
    #[error("line is horizontal (q3 = 0)")]
    HorizontalLine,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("field is not defined at {0:?}")]
    EvaluationDomain([f64; 4]),
    #[error("argument outside the domain of the closed form")]
    OutOfDomain,
    #[error("adaptive quadrature did not reach tolerance {tolerance} (estimate {estimate})")]
    NonConvergent { tolerance: f64, estimate: f64 },
    #[error("integrand does not decay at the truncation point T = {truncation}")]
    NonIntegrable { truncation: f64 },
    #[error("conjugate plane is singular (1 - 2H cos(theta) = 0)")]
    SingularConjugate,
    #[error("balls {0} and {1} overlap")]
    OverlappingBalls(usize, usize),
    #[error("conic kind does not match the requested integrator: {0}")]
    KindMismatch(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
