//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A magnetic quantum number outside the ladder −j ≤ m ≤ j, or one that
    /// does not differ from j by an integer.
    #[error("m = {m} is not a level of the j = {j} ladder")]
    LevelOutOfRange { j: f64, m: f64 },

    #[error("polar angle theta = {theta} outside [0, pi]")]
    ThetaOutOfRange { theta: f64 },

    #[error("spin systems differ: 2j = {left} vs 2j = {right}")]
    SystemMismatch { left: u32, right: u32 },

    #[error("vector length {len} does not match dim = {dim}")]
    VectorLength { len: usize, dim: usize },

    #[error("matrix shape {rows}x{cols} does not match dim = {dim}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        dim: usize,
    },

    #[error("negative evolution time tau = {tau}")]
    NegativeTime { tau: f64 },

    /// The adaptive integrator could not advance past `achieved`.
    #[error("step size underflow at tau = {achieved} (requested {requested})")]
    StepUnderflow { achieved: f64, requested: f64 },

    #[error("dense superoperator oracle limited to dim <= {max}, got dim = {dim}")]
    DenseOracleTooLarge { dim: usize, max: usize },

    #[error("cat coefficients are both zero")]
    ZeroCatCoefficients,

    /// Destructive interference of (nearly) identical components.
    #[error("cat normalization is degenerate (denominator = {denominator:.3e})")]
    DegenerateCat { denominator: f64 },

    #[error("component count m = {m} must be a positive even integer")]
    InvalidComponentCount { m: i64 },

    #[error("dispersive shift eta = 0; component times are undefined")]
    ZeroDispersiveShift,

    #[error("gamma = 0 has no inverse partner on the sphere")]
    ZeroGamma,

    #[error("non-positive norm sample N = {value} at tau = {tau}")]
    NonPositiveSample { tau: f64, value: f64 },

    #[error("decay fit needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("decay fit design matrix is rank-deficient")]
    RankDeficientFit,

    #[error("operator has (numerically) zero trace; no Bloch vector")]
    ZeroTrace,
}
