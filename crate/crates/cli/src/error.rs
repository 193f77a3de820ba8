//! Error type shared by all subcommands, carrying the process exit code.
//!
//! Exit codes: 0 success, 1 usage/config error (including missing or
//! unreadable paths), 2 data/parse error, 3 numerical failure.

use std::path::Path;

use mixbow_core::ensemble::EnsembleError;
use mixbow_core::features::FeatureError;
use mixbow_core::metrics::MetricsError;
use mixbow_core::network::NetworkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation or configuration: unknown keys, invalid values,
    /// missing files, mismatched artifacts.
    #[error("{0}")]
    Usage(String),
    /// Input data could not be parsed or is semantically unusable.
    #[error("{0}")]
    Data(String),
    /// Training produced a non-finite loss.
    #[error("{0}")]
    Numeric(String),
    /// An I/O operation failed.
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    /// Wraps an I/O error with the path it concerns.
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io { context: path.display().to_string(), source }
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> CliError {
        CliError::Io { context: "i/o".to_string(), source }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> CliError {
        match e {
            NetworkError::Diverged { .. } => CliError::Numeric(e.to_string()),
            NetworkError::EmptyTrainingSet | NetworkError::EmptyValidationSet => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> CliError {
        match &e {
            EnsembleError::Member { source: NetworkError::Diverged { .. }, .. } => {
                CliError::Numeric(e.to_string())
            }
            EnsembleError::Network(NetworkError::Diverged { .. }) => {
                CliError::Numeric(e.to_string())
            }
            EnsembleError::EmptyTrainingSet => CliError::Data(e.to_string()),
            EnsembleError::Member { source: NetworkError::EmptyTrainingSet, .. } => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> CliError {
        match e {
            FeatureError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            FeatureError::UnorderedEntries { .. } | FeatureError::UnlabeledTweet { .. } => {
                CliError::Data(e.to_string())
            }
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> CliError {
        CliError::Data(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Data("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numeric("x".into()).exit_code(), 3);
        let io = CliError::io(
            Path::new("/nope"),
            std::io::Error::new(std::io::ErrorKind::NotFound, "gone"),
        );
        assert_eq!(io.exit_code(), 1);
        assert!(io.to_string().contains("/nope"));
    }

    #[test]
    fn divergence_is_numeric() {
        let e: CliError = NetworkError::Diverged { epoch: 3 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = EnsembleError::Member {
            index: 1,
            source: NetworkError::Diverged { epoch: 0 },
        }
        .into();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("member 1"));
    }

    #[test]
    fn bad_network_config_is_usage() {
        let e: CliError = NetworkError::InvalidConfig("num_layers must be >= 2").into();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn unlabeled_tweet_is_data() {
        let e: CliError = FeatureError::UnlabeledTweet { id: 9 }.into();
        assert_eq!(e.exit_code(), 2);
    }
}
