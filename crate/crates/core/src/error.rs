use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient a_{index} = {value} is negative or not finite")]
    NegativeCoefficient { index: u32, value: f64 },
    #[error("coefficient index {index} lies below the first live index k = {k}")]
    IndexBelowK { index: u32, k: u32 },
    #[error("coefficient index {index} exceeds the truncation order {trunc}")]
    IndexAboveTrunc { index: u32, trunc: u32 },
    #[error("first live index k must be at least 1")]
    ZeroK,
    #[error("truncation order {trunc} exceeds the cap {cap}")]
    TruncTooLarge { trunc: u32, cap: u32 },
    #[error("fixed point w has modulus {modulus}, must lie in the open unit disk")]
    FixedPointOutsideDisk { modulus: f64 },
    #[error("evaluation at the pole z = w")]
    EvalAtPole,
    #[error("|z - w| = {distance} is outside the evaluation domain (0, 1)")]
    OutsideDomain { distance: f64 },
    #[error("weights must be nonnegative and sum to 1 (sum = {sum})")]
    WeightsNotConvex { sum: f64 },
    #[error("series in a combination must share the fixed point w")]
    MixedFixedPoints,
    #[error("nothing to combine")]
    EmptyCombination,
    #[error("numerical overflow guard tripped at index {index}")]
    OverflowGuard { index: u32 },
    #[error("operator order m = {m} exceeds the supported maximum {max}")]
    OrderTooLarge { m: u32, max: u32 },
    #[error("H1 parameter gamma = {gamma} must exceed 1")]
    GammaOutOfRange { gamma: f64 },
    #[error("H2 parameter C = {c} must be at least 1")]
    COutOfRange { c: f64 },
    #[error("class parameters A = {a}, B = {b} violate -1 <= B < A < 1, A >= 0")]
    InvalidClassParams { a: f64, b: f64 },
    #[error("quadrature did not reach tolerance {tolerance} (error estimate {estimate})")]
    QuadratureNonConvergence { tolerance: f64, estimate: f64 },
    #[error("(I^m f)'(z) vanishes at the sample point")]
    DerivativeVanishes,
    #[error("function is not a member of the class (margin {margin})")]
    NotAMember { margin: f64 },
    #[error("input {position} of the combination is not a member (margin {margin})")]
    InputNotMember { position: usize, margin: f64 },
    #[error("extreme points f_1..f_(k-1) are excluded; got n = {n} with k = {k}")]
    IndexBetween1AndKminus1 { n: u32, k: u32 },
    #[error("sampling grid needs radii in (0, 1) and at least one angle")]
    InvalidGrid,
    #[error("{functions} functions but {weights} weights")]
    LengthMismatch { functions: usize, weights: usize },
    #[error("series is not of the canonical form 1/(z-w) + nonnegative real tail")]
    NotCanonical,
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::OverflowGuard { .. }
                | Error::DerivativeVanishes
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
