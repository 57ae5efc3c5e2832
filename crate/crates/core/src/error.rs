use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty lexical form for {0}")]
    EmptyLexical(&'static str),

    #[error("blank nodes are not supported")]
    BlankNode,

    #[error("{position} of a triple cannot be {found}")]
    BadPosition {
        position: &'static str,
        found: &'static str,
    },

    #[error("line {line}: syntax error: {reason}")]
    Syntax { line: usize, reason: String },

    #[error("line {line}: blank node `{label}` rejected, blank nodes are not supported")]
    BlankNodeRejected { line: usize, label: String },

    #[error("line {line}: IRI <{iri}> uses a reserved namespace")]
    ReservedNamespace { line: usize, iri: String },

    #[error("line {line}: COMPLETE block has no triple pattern")]
    EmptyPattern { line: usize },

    #[error("completeness statement pattern must contain at least one triple pattern")]
    EmptyStatementPattern,

    #[error("unsafe query: selected variable(s) {} do not occur in the positive part", .0.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(", "))]
    UnsafeQuery(Vec<String>),

    #[error("ill-formed CONSTRUCT: template variable(s) {} do not occur in the WHERE positive part", .0.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(", "))]
    IllFormedConstruct(Vec<String>),

    #[error("not an interpretation: the lower graph is not contained in the upper graph")]
    NotAnInterpretation,

    #[error("universe too large: {candidates} candidate triples exceed the cap of {cap}")]
    UniverseTooLarge { candidates: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", .path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {reason}", .path.display())]
    Io { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn syntax(line: usize, reason: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
