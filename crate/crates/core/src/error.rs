use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate. Shape problems and
/// law violations are kept apart so callers can tell a bad table from a
/// failed claim.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally broken input: non-square tables, out-of-range indices,
    /// unknown labels, inconsistent lengths.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Input parses but fails its own validation laws; the message names the
    /// first violated law and a witness.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown builtin quantale `{0}`")]
    UnknownBuiltin(String),

    #[error("size {0} is not valid for this builtin quantale")]
    BadSize(usize),

    #[error("operands live over different quantales")]
    MismatchedQuantale,

    #[error("carrier size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("the maps do not form a point: the section composed with the projection is not the identity")]
    NotAPoint,

    #[error("not a V-homomorphism: {0}")]
    NotVHom(String),

    #[error("point does not carry the product structure")]
    NotProductPoint,

    #[error("operation requires a cartesian quantale")]
    NonCartesian,

    #[error("enumeration cap of {cap} exceeded while {during}")]
    CapExceeded { cap: usize, during: String },

    /// A property this crate treats as certain failed at run time. Seeing
    /// this error means a bug, either here or in the input data invariants.
    #[error("established property failed: {claim} (witness {witness})")]
    PropertyFailure { claim: String, witness: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn property(claim: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::PropertyFailure {
            claim: claim.into(),
            witness: witness.into(),
        }
    }
}
