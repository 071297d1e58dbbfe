use thiserror::Error;

/// Errors produced by any pipeline stage.
#[derive(Debug, Error)]
pub enum Error {
    /// Region ID outside the grid's `1..=width*height` range.
    #[error("region id {id} out of range for a grid with {regions} regions")]
    RegionOutOfRange { id: u32, regions: u32 },

    /// Cell coordinates outside the grid bounds.
    #[error("cell ({x}, {y}) out of range for a {width}x{height} grid")]
    CoordsOutOfRange {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },

    /// Malformed input file.
    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    /// Invalid parameter or configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Trained model is unusable for sampling.
    #[error("model error: {0}")]
    Model(String),

    /// Attack preconditions not met.
    #[error("attack error: {0}")]
    Attack(String),

    /// Metric preconditions not met.
    #[error("metric error: {0}")]
    Metric(String),

    /// Scoring inputs do not line up (dimensions, owners, pseudonyms).
    #[error("score input mismatch: {0}")]
    Mismatch(String),

    /// A contest stage failed; carries the stage name for diagnostics.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(source_name: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub fn in_stage(self, stage: &str) -> Self {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
