use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tempered::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for bad input, 3 for cap or precision limits, 4 for non-finite
    /// values, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use tempered::Error as E;
        match self {
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Core(E::InvalidArgument(_) | E::NotHermiteForm | E::Serialization(_)) => 2,
            CliError::Core(E::CapExceeded { .. } | E::Precision(_)) => 3,
            CliError::Core(E::NonFinite(_)) => 4,
            CliError::Core(E::Io(_)) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "invalid_input",
            3 => "limit_exceeded",
            4 => "non_finite",
            _ => "io",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
