use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0} is reducible over F_{1}")]
    ReducibleModulus(String, u32),
    #[error("no built-in modulus for q = {0}; supply one explicitly")]
    NoDefaultModulus(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field order {0} exceeds the supported limit {1}")]
    FieldTooLarge(u64, u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("gcd of an all-zero list")]
    AllZero,
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("numerator degree must be below the denominator degree")]
    DegreeOverflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("precision {have} is below the required {need}")]
    PrecisionTooLow { have: usize, need: usize },
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("enumeration needs {required} units but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("denominator set has no usable member in degrees {from}..={cap}")]
    CapExceeded { from: usize, cap: usize },
    #[error("syntax error in {what} near {token:?}: {reason}")]
    Syntax {
        what: &'static str,
        token: String,
        reason: String,
    },
    #[error("power-set base must be monic")]
    NonMonicBase,
    #[error("power-set base must be non-constant")]
    ConstantBase,
    #[error("denominator set is empty")]
    EmptySet,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("degree {degree} exceeds the allowed maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("operation requires a degree-valued distribution")]
    WrongStatistic,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(what: &'static str, token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Syntax {
            what,
            token: token.into(),
            reason: reason.into(),
        }
    }
}
