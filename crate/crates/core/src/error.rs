use thiserror::Error;

/// Errors produced by the simulator, the sampler and the analysis battery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("out of range: {0}")]
    Range(String),

    /// The sample plan asks for instants beyond the end of the signal.
    #[error("sample plan extends past the signal duration; at most {max_count} samples fit")]
    PlanTooLong { max_count: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
