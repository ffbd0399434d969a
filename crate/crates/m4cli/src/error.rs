use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("series {0} has no test values")]
    MissingTestSeries(String),

    #[error("unknown model {0:?}")]
    UnknownModel(String),

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("no reference value for {model} / {dataset} / {metric}")]
    MissingReference {
        model: String,
        dataset: String,
        metric: String,
    },

    #[error("incomplete model x series grid: {0}")]
    IncompleteGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Forecast(#[from] tsforecast::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
