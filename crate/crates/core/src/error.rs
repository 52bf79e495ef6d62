use thiserror::Error;

/// Everything that can go wrong before a law check gets to run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    Malformed(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("cycle in preorder covers: {0} and {1} are mutually related")]
    Cycle(String, String),

    #[error("boundary mismatch: {0}")]
    Mismatch(String),

    #[error("{0} is not in the source category")]
    NotInSource(String),

    #[error("enumeration cap exceeded: {what} needs {needed} but the cap is {cap}")]
    CapExceeded {
        what: String,
        needed: String,
        cap: u64,
    },

    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("ill-typed term: {0}")]
    IllTyped(String),

    #[error("stage error: {0}")]
    Stage(String),

    #[error("unassigned element {0}")]
    Unassigned(String),

    #[error("cyclic hom graph in layer {0}")]
    CyclicLayer(String),

    #[error("undefined macro {0}")]
    UndefinedMacro(String),

    #[error("name capture in macro {macro_name}: {detail}")]
    NameCapture { macro_name: String, detail: String },

    #[error("model error: {0}")]
    Model(String),

    #[error("not universal at {object}: {detail}")]
    NotUniversal { object: String, detail: String },

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
