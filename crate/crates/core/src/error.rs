use thiserror::Error;

/// Errors raised by the computational routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol {symbol} has no {side} in the transition matrix")]
    ZeroRowOrColumn { symbol: usize, side: &'static str },
    #[error("transition matrix is not primitive")]
    NotPrimitive,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("potential has range {0}; recode to range 2 first")]
    RangeTooLarge(usize),
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("depth {depth} requires {count} cylinders, above the budget of {budget}")]
    DepthTooLarge { depth: usize, count: u128, budget: u64 },
    #[error("enumeration of {count} configurations exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("period {0} is beyond the enumeration limit")]
    PeriodTooLarge(usize),
    #[error("measure charges a cylinder that is null for the reference measure")]
    SupportMismatch,
    #[error("path has zero mass from position {0} on")]
    ZeroMassPath(usize),
    #[error("target {target} outside the open interval ({lo}, {hi})")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("observable is constant")]
    DegenerateObservable,
    #[error("value {0} is out of range")]
    OutOfRange(f64),
    #[error("family has no analytic tail bound")]
    UndeterminedTail,
    #[error("series tail could not be certified below {0:e}")]
    TailUncertified(f64),
    #[error("branch {branch} violates the Markov property: {reason}")]
    NotMarkov { branch: usize, reason: String },
    #[error("branch {branch} has slope {slope}, not expanding")]
    NotExpanding { branch: usize, slope: f64 },
    #[error("map is a repeller (pressure {0:e} < 0); use the dimension computation")]
    IsRepeller(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Errors caused by an enumeration or iteration budget rather than by the model.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::DepthTooLarge { .. } | Error::BudgetExceeded { .. } | Error::PeriodTooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
