use std::fmt;

/// Failure of a workbench command or request.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A document or argument failed validation. `field` is the document path
    /// of the offending value, empty when the whole input is at fault.
    #[error("{}", Located(field, message))]
    Input { field: String, message: String },
    #[error("{0} not found")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("internal error: {0}")]
    Internal(String),
}

struct Located<'a>(&'a str, &'a str);

impl fmt::Display for Located<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str(self.1)
        } else {
            write!(f, "{}: {}", self.0, self.1)
        }
    }
}

impl Error {
    pub fn input(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Error::Input {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl fmt::Display) -> Self {
        Error::Internal(message.to_string())
    }

    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 2,
            _ => 1,
        }
    }

    pub fn field(&self) -> &str {
        match self {
            Error::Input { field, .. } => field,
            _ => "",
        }
    }
}

impl From<quasar_core::assessment::SnapshotError> for Error {
    fn from(e: quasar_core::assessment::SnapshotError) -> Self {
        Error::input(e.field, e.source)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
