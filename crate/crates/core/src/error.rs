use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    UndeclaredVertex { edge: String, vertex: String },
    #[error("malformed graph JSON: {0}")]
    Json(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("basis cap exceeded: {required} paths needed, cap is {cap}")]
    Cap { required: usize, cap: usize },
    #[error("window overflow: {0}")]
    Window(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::DuplicateId { .. } | Error::UndeclaredVertex { .. } | Error::Json(_)
        )
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget(_) | Error::Cap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
