//! Chart specifications, check suites, reports and the genus command.

pub mod genus_cmd;
pub mod report;
pub mod spec;
pub mod suites;

pub use report::{CheckReport, Record, Status};
pub use spec::{parse_chart_spec, ChartSpec};
pub use suites::{run_suite, RunConfig, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: {msg}")]
    UndeclaredVariable { line: usize, col: usize, msg: String },
    #[error("line {line}: unknown bundle kind '{kind}' (expected tangent, cotangent or general)")]
    UnknownBundleKind { line: usize, kind: String },
    #[error("line {line}: overlap {overlap} has a singular Jacobian")]
    SingularJacobian { line: usize, overlap: String },
    #[error("{0}")]
    Invalid(String),
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Core(#[from] chiral_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
