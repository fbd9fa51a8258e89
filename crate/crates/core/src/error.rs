use thiserror::Error;

/// Errors reported by the toolkit.
///
/// Precondition violations (domain errors, invalid parameters, mismatched
/// supports) are distinguished from computational failures (divergent
/// quadrature, empty search grids) so that callers can map them to
/// different exit codes.
#[derive(Debug, Error)]
pub enum GlsError {
    #[error("parameter `{name}` out of range: {constraint}")]
    ParameterOutOfRange { name: &'static str, constraint: String },

    #[error("p = {p} outside the support [1, {b}) of the generating function")]
    OutOfSupport { p: f64, b: f64 },

    #[error("generating functions have incompatible support bounds: {left} vs {right}")]
    IncompatibleSupport { left: f64, right: f64 },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("moment profiles must share a common p-grid")]
    IncompatibleGrids,

    #[error("y = {y} below the validity threshold e*norm = {threshold}")]
    OutOfValidity { y: f64, threshold: f64 },

    #[error("moment integral does not converge at p = {p}: tail envelope too heavy")]
    UnboundedMoment { p: f64 },

    #[error("no finite value found on the search grid")]
    NoFiniteValue,

    #[error("no closed form for this family; use the grid minimizer instead")]
    NoClosedForm,

    #[error("indeterminate ratio at p = {p}: |f|_p = 0 while |g|_p > 0")]
    IndeterminateRatio { p: f64 },

    #[error("convergence target requires zeta << tau (zeta/tau -> 0 at the right endpoint)")]
    DominationRequired,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GlsError>;

impl GlsError {
    /// True for errors that signal a violated caller-side precondition,
    /// false for failures arising during an otherwise valid computation.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            GlsError::UnboundedMoment { .. }
                | GlsError::NoFiniteValue
                | GlsError::IndeterminateRatio { .. }
        )
    }
}
