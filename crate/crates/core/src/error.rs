use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    InvalidParams(&'static str),
    /// Argument outside the domain of a function.
    Domain(&'static str),
    /// Caller broke a documented precondition.
    Contract(&'static str),
    /// Analytic and numeric transformed Hamiltonians disagree.
    Convention { max_deviation: f64 },
    /// Bisection bracket without a sign change.
    NoSignChange { lo: f64, hi: f64 },
    IndexOutOfRange { index: usize, len: usize },
    /// A state has weight in both parity sectors.
    IndeterminateParity { even_weight: f64, odd_weight: f64 },
    DegenerateDenominator,
    DegenerateInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid model parameters: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Convention { max_deviation } => write!(
                f,
                "analytic and numeric transformed Hamiltonians differ by {max_deviation:e}"
            ),
            Error::NoSignChange { lo, hi } => {
                write!(f, "no sign change of the stationarity condition on [{lo}, {hi}]")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "state index {index} out of range (len {len})")
            }
            Error::IndeterminateParity { even_weight, odd_weight } => write!(
                f,
                "trial state has no definite parity (even {even_weight:e}, odd {odd_weight:e})"
            ),
            Error::DegenerateDenominator => write!(f, "vanishing energy denominator"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
