use thiserror::Error;

/// Errors raised while loading instances, building the hierarchy, or
/// replaying client events.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("facility {facility}: opening cost must be an integer >= 1, got {cost}")]
    InvalidCost { facility: u64, cost: String },

    #[error("distance {distance} between {a} and {b} exceeds diameter bound W={bound}")]
    DiameterViolation {
        a: String,
        b: String,
        distance: f64,
        bound: f64,
    },

    #[error("distance matrix is not a metric: {0}")]
    NotAMetric(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("no facility is cheap enough for the top logradius")]
    NoUsableFacility,

    #[error("point is {distance} from the root facility, beyond W={bound}")]
    OutOfDiameter { distance: f64, bound: f64 },

    #[error("client {0} is already live")]
    DuplicateClient(String),

    #[error("no live client {0}")]
    NoSuchClient(String),

    #[error("too large for exhaustive search: {0}")]
    TooLargeForExhaustive(String),

    #[error("invalid workload spec: {0}")]
    InvalidSpec(String),

    #[error("approximation bound violated: ratio {ratio} > {bound}")]
    BoundViolated { ratio: f64, bound: f64 },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
