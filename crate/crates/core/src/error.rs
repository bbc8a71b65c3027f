use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// The variants split into two families that callers (the CLI in
/// particular) treat differently: input validation problems, which are the
/// caller's fault, and computation failures such as exhausted budgets or
/// quadratures that did not converge.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaringError {
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("capacity exceeded: {what} needs {required} cells, budget is {budget}")]
    Capacity {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("enumeration guard exceeded: {required} tuples > {guard}")]
    EnumerationGuard { required: u128, guard: u128 },

    #[error("quadrature did not converge for {what}: error estimate {estimate:e} > tol {tol:e}")]
    NonConvergence {
        what: String,
        estimate: f64,
        tol: f64,
    },

    #[error("major arcs around {first} and {second} overlap")]
    ArcOverlap { first: String, second: String },

    #[error("local density at p = {p} did not stabilize by h = {h}: last step {last_step:e}, dual gap {dual_gap:e}")]
    Stabilization {
        p: u64,
        h: u32,
        last_step: f64,
        dual_gap: f64,
    },

    #[error("value overflows f64 range (log value {log_value})")]
    Overflow { log_value: f64 },
}

impl WaringError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        WaringError::InvalidInput {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad arguments rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, WaringError::InvalidInput { .. })
    }
}

pub type Result<T> = std::result::Result<T, WaringError>;
