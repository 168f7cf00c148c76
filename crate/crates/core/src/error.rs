use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ModelError>,
    },
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("duplicate transition `{0} {1} {2}`")]
    DuplicateTransition(String, String, String),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("undeclared event `{0}`")]
    UndeclaredEvent(String),
    #[error("symbol `{0}` not in alphabet")]
    UnknownSymbol(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("reflexive specification pair ({0}, {0})")]
    ReflexivePair(String),
    #[error("invalid JSON model: {0}")]
    Json(String),
}

impl ModelError {
    pub(crate) fn at(self, line: usize) -> ModelError {
        match self {
            e @ (ModelError::Syntax { .. } | ModelError::AtLine { .. }) => e,
            e => ModelError::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("{count} controllable transitions exceed the exhaustive search cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("no enforcement procedure for {0}")]
    Unsupported(String),
}
