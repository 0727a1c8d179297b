use thiserror::Error;

/// Errors raised by the algebra, series and Hopf machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("negative power of v_n is not allowed over the coefficient ring {0}")]
    NegativeVPower(String),

    #[error("coefficient {0} is not p-integral")]
    NotPIntegral(String),

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("name collision: `{0}`")]
    NameCollision(String),

    #[error("mismatched contexts: {0}")]
    ContextMismatch(String),

    #[error("relation does not map to zero: {0}")]
    RelationNotPreserved(String),

    #[error("degree {degree} component is not finite within bound {bound}")]
    NotFinite { degree: i64, bound: u32 },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series is not strict: {0}")]
    NotStrict(String),

    #[error("exponent {0:?} lies outside the truncation window")]
    OutOfWindow(Vec<u32>),

    #[error("not an H_n-adic series: unexpected term at x^{0}")]
    NotHnAdic(u32),

    #[error("homomorphism condition fails: {0}")]
    NotHomomorphism(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("construction bug: {0}")]
    Construction(String),

    #[error("coproduct of `{0}` is not of recursive form")]
    NotRecursive(String),

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("fiber compatibility violated: {0}")]
    Incompatible(String),

    #[error("{0} is infeasible at this window")]
    Infeasible(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
