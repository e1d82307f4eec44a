//! Crate-wide error type.

use thiserror::Error;

/// A single task-set validation violation. `validate_task_set` reports
/// every violation it finds, not just the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskSetViolation {
    DuplicateTaskId(String),
    DuplicateAbbreviation(String),
    EmptyAbbreviation(String),
    EmptyTaskList,
    TooFewTasks(usize),
}

impl std::fmt::Display for TaskSetViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DuplicateTaskId(id) => write!(f, "duplicate task id {id:?}"),
            Self::DuplicateAbbreviation(ab) => write!(f, "duplicate abbreviation {ab:?}"),
            Self::EmptyAbbreviation(id) => write!(f, "task {id:?} has an empty abbreviation"),
            Self::EmptyTaskList => write!(f, "task list is empty"),
            Self::TooFewTasks(n) => write!(f, "task list has {n} task(s); at least 2 required"),
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid task set: {}", join(.0))]
    InvalidTaskSet(Vec<TaskSetViolation>),

    #[error("unknown task id {0:?}")]
    UnknownTaskId(String),

    #[error("missing cell(s) for model {model_id:?} seed {seed}: {}",
            join(&.cells.iter().map(|(s, t)| format!("({s} -> {t})")).collect::<Vec<_>>()))]
    MissingCell {
        model_id: String,
        seed: i64,
        cells: Vec<(String, String)>,
    },

    #[error("duplicate cell ({source_task} -> {target}) for model {model_id:?} seed {seed}")]
    DuplicateCell {
        model_id: String,
        seed: i64,
        source_task: String,
        target: String,
    },

    #[error("conflicting question counts for target {target:?} (saw {first} and {second})")]
    InconsistentQuestionCount {
        target: String,
        first: u32,
        second: u32,
    },

    #[error("accuracy {value} for ({source_task} -> {target}) outside [0, 100]")]
    AccuracyOutOfBounds {
        source_task: String,
        target: String,
        value: f64,
    },

    #[error("matrices mix models {0:?} and {1:?}")]
    MixedModels(String, String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("question count must be at least 1")]
    InvalidQuestionCount,

    #[error("task index {index} out of range for {n} tasks")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("all differences are zero; the signed-rank statistic is undefined")]
    AllZeroDifferences,

    #[error("need at least 2 samples per group (got {0} and {1})")]
    InsufficientSamples(usize, usize),

    #[error("both samples have zero variance; the t statistic is undefined")]
    ZeroVarianceBoth,

    #[error("degrees of freedom must be positive (got {0})")]
    InvalidDegreesOfFreedom(f64),

    #[error("zero vector {0:?} has no direction")]
    ZeroVector(String),

    #[error("vector {id:?} has length {len}, expected {expected}")]
    LengthMismatch {
        id: String,
        len: usize,
        expected: usize,
    },

    #[error("brute-force clique enumeration supports at most 16 tasks (got {0})")]
    TooLarge(usize),

    #[error("no models present in the score tables")]
    MissingModel,

    #[error("inconsistent planted structure: {}", join(.0))]
    InconsistentStructure(Vec<String>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: malformed row: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("missing required column {0:?}")]
    MissingColumn(&'static str),

    #[error("line {line}: accuracy {value:?} is not numeric")]
    NonNumericAccuracy { line: u64, value: String },

    #[error("line {line}: accuracy {value} outside [0, 100]")]
    AccuracyOutOfRange { line: u64, value: f64 },

    #[error("unsupported schema version {found} (supported: {supported})")]
    UnsupportedSchemaVersion { found: u32, supported: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("record file is not valid structured-records JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("record file is not valid delimited text: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
