use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("demand of {demand_bps} bit/s exceeds the top MCS rate of {max_rate_bps} bit/s")]
    DemandUnsatisfiable { demand_bps: f64, max_rate_bps: f64 },

    /// The power sweep reached the maximum transmission power without
    /// finding a non-empty placement subspace.
    #[error("no gateway placement up to {max_tx_power_dbm} dBm{}", at_time.map(|t| format!(" at t = {t} s")).unwrap_or_default())]
    NoSolution {
        max_tx_power_dbm: f64,
        at_time: Option<f64>,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("undefined gain: baseline percentile is zero")]
    UndefinedGain,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
