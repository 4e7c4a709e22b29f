use thiserror::Error;

/// Every failure the toolkit can raise.
///
/// Verification *failures* are not errors: they are recorded inside reports.
/// This type is reserved for malformed input and for exhausted resource
/// limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("epsilon power {power} exceeds the configured bound {bound}")]
    EpsOverflow { power: i32, bound: u32 },
    #[error("mixed truncation: cannot combine ring {left} with ring {right}")]
    MixedTruncation { left: String, right: String },
    #[error("not divisible by h^{k}: term of h-order {found}")]
    NotDivisible { k: u32, found: u32 },
    #[error("singular limit e -> 0{}", context_suffix(.context))]
    SingularLimit { context: String },
    #[error("word of length {length} exceeds the degree cap {cap}")]
    DegreeCapExceeded { length: usize, cap: usize },
    #[error("rewrite fuel of {fuel} steps exhausted")]
    FuelExhausted { fuel: u64 },
    #[error("slot mismatch: {left} slots vs {right} slots")]
    SlotMismatch { left: usize, right: usize },
    #[error("series argument has a term of h-order zero: {0}")]
    NonNilpotentArgument(String),
    #[error("element is not invertible as a series: {0}")]
    NotInvertible(String),
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("presentation {0} carries no Hopf data")]
    NoHopfData(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("subset is not closed: {0}")]
    NotClosed(String),
    #[error("malformed scaling map: {0}")]
    MalformedScaling(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" in {context}")
    }
}

impl Error {
    /// True for failures caused by the rewrite fuel or the degree cap.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::FuelExhausted { .. }
                | Error::DegreeCapExceeded { .. }
                | Error::EpsOverflow { .. }
        )
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
