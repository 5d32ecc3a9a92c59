use std::fmt;

use thiserror::Error;

/// Failures surfaced by the command-line layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },

    #[error("{flag}: {message}")]
    Domain { flag: String, message: String },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Compute(#[from] tritangle::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn usage(flag: &str, message: impl Into<String>) -> Self {
        CliError::Usage { flag: flag.to_string(), message: message.into() }
    }

    pub fn domain(flag: &str, message: impl Into<String>) -> Self {
        CliError::Domain { flag: flag.to_string(), message: message.into() }
    }

    pub fn config(line: usize, message: impl Into<String>) -> Self {
        CliError::Config { line, message: message.into() }
    }

    pub fn io(path: impl fmt::Display, e: impl fmt::Display) -> Self {
        CliError::Io { path: path.to_string(), message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage { .. } => "usage",
            CliError::Domain { .. } => "domain",
            CliError::Config { .. } => "config",
            CliError::Compute(_) => "compute",
            CliError::Io { .. } => "io",
        }
    }

    pub fn flag(&self) -> Option<&str> {
        match self {
            CliError::Usage { flag, .. } | CliError::Domain { flag, .. } => Some(flag),
            _ => None,
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Domain { .. } | CliError::Config { .. } => 2,
            CliError::Compute(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    /// Single line of `key=value` pairs for scripts, e.g.
    /// `error kind=domain flag=--d message="..."`.
    pub fn machine_line(&self) -> String {
        let mut line = format!("error kind={}", self.kind());
        match self {
            CliError::Usage { flag, message } | CliError::Domain { flag, message } => {
                line += &format!(" flag={flag} message={message:?}");
            }
            CliError::Config { line: n, message } => line += &format!(" line={n} message={message:?}"),
            CliError::Compute(e) => line += &format!(" message={:?}", e.to_string()),
            CliError::Io { path, message } => line += &format!(" path={path:?} message={message:?}"),
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_line_names_the_flag() {
        let e = CliError::domain("--d", "d = 1.2 outside [0, 1]");
        assert_eq!(e.machine_line(), "error kind=domain flag=--d message=\"d = 1.2 outside [0, 1]\"");
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::config(3, "bad").machine_line(), "error kind=config line=3 message=\"bad\"");
    }
}
