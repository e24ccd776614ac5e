use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HwError {
    /// An argument lies outside the domain of the function.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    /// An iterative method ran out of iterations.
    #[error("{what} did not converge within {iterations} iterations")]
    Convergence {
        what: &'static str,
        iterations: usize,
    },
    /// A root could not be bracketed.
    #[error("no root of {what} on the admissible range")]
    NoRoot { what: &'static str },
    /// Floating-point cancellation destroyed the result.
    #[error("cancellation left fewer than three significant digits in {what}")]
    PrecisionLoss { what: &'static str },
}

impl HwError {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        HwError::Domain {
            name,
            value,
            domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, HwError>;

/// Rejects NaN and values that are not strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(HwError::domain(name, value, "(0, inf)"))
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(HwError::domain(name, value, "finite"))
    }
}
