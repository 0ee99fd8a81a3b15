use thiserror::Error;

/// Errors raised by the numerical kernel and the scenario models.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaseError {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions: estimate {estimate}, error {error}")]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("no interior optimum for path-loss exponent a = {a} (requires a > 2)")]
    NoInteriorOptimum { a: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("spatial region too small: excluded tail {tail} exceeds {limit} of the estimate; enlarge the radius")]
    TailCertification { tail: f64, limit: f64 },
}

impl GaseError {
    pub(crate) fn domain(what: &'static str, value: impl Into<f64>) -> Self {
        GaseError::Domain {
            what,
            value: value.into(),
        }
    }

    /// True for quadrature/iteration failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, GaseError::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, GaseError>;
