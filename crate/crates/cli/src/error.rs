use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing input; the message names the offending field.
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn config(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("{field}: {reason}"))
    }
}

impl From<blockage_core::Error> for CliError {
    fn from(e: blockage_core::Error) -> Self {
        use blockage_core::Error as E;
        match e {
            E::InvalidParameter { name, reason } => {
                CliError::config(&format!("scenario.{name}"), reason)
            }
            E::Unsupported { .. } => CliError::Config(e.to_string()),
            E::Domain { .. } | E::DegenerateMoments(_) | E::Quadrature { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use blockage_core::Error as E;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let invalid = CliError::from(E::InvalidParameter {
            name: "alpha",
            reason: "must exceed 2".into(),
        });
        assert_eq!(invalid.exit_code(), 1);
        assert!(invalid.to_string().contains("scenario.alpha"));
        let quad = CliError::from(E::Quadrature {
            estimate: 0.1,
            abs_error: 1.0,
            target: 1e-9,
        });
        assert_eq!(quad.exit_code(), 2);
        let degenerate = CliError::from(E::DegenerateMoments("var <= 0".into()));
        assert_eq!(degenerate.exit_code(), 2);
    }
}
