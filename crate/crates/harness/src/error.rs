use std::io;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] bethe_core::Error),
    #[error("no admissible sample after {attempts} rejection attempts")]
    SamplingExhausted { attempts: usize },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{resampled} resamples while collecting {wanted} samples; giving up")]
    TooManyResamples { wanted: usize, resampled: usize },
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: &'static str },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
