use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("differential has no image in the top cone")]
    NoTopImage,

    /// A top-cone differential `d(lambda) = tau^k nu` with `k > 0`. It is not
    /// surjective onto the new summand and cannot come from attaching a cell.
    #[error("differential not realizable by a cell attachment: d({lambda}) = tau^{k0} nu with k0 > 0")]
    NotRealizable { lambda: String, k0: u32 },

    #[error("cell {index} breaks the ordering (p non-decreasing, then q non-decreasing)")]
    InvalidOrdering { index: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),

    #[error("stage {index}: {source}")]
    Stage {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// The underlying error, with any stage wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_not_realizable(&self) -> bool {
        matches!(self.root(), Error::NotRealizable { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
