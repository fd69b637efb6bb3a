//! Error type shared by every module; variants map onto process exit codes.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes for sampling, bound evaluation, and experiment runs.
///
/// The CLI maps variants to exit codes: [`Error::ResourceCap`] exits 3,
/// [`Error::DegenerateInput`] exits 4, everything else exits 2.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request is well formed but larger than the hard caps allow.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Inputs are structurally valid but carry no usable information
    /// (for example, every pair of points coincides).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A moment generating function diverges inside the requested window.
    #[error("domain error: {0}")]
    Domain(String),

    /// A file could not be read or written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A file was read but its contents do not match the expected format.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap(_) => 3,
            Error::DegenerateInput(_) => 4,
            _ => 2,
        }
    }
}
