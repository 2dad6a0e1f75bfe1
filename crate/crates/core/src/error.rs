use alloc::string::String;

use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not flow-admissible: edge {edge} lies in no signed circuit")]
    NotFlowAdmissible { edge: EdgeId },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("minimum signature search inexact: best signature found has {best} negative edges")]
    InexactSignature { best: usize },
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    /// A constructive step could not complete. The message carries the
    /// serialized instance so it can be replayed.
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! construction {
    ($($arg:tt)*) => {
        $crate::error::Error::Construction(alloc::format!($($arg)*))
    };
}

macro_rules! precondition {
    ($($arg:tt)*) => {
        $crate::error::Error::Precondition(alloc::format!($($arg)*))
    };
}

pub(crate) use construction;
pub(crate) use precondition;
