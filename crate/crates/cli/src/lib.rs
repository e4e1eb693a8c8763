//! Command-line front end: configuration, dispatch and table output.

pub mod config;
pub mod run;
pub mod table;

pub use config::{Check, Command, Emit, Grid, Model, RunConfig};
pub use run::{emit_phase_table, run};
pub use table::{format_float, Cell, Table};

use glassdual_core::ErrorKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] glassdual_core::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for domain, usage and configuration errors, 2 for numerics, 3 for
    /// resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Domain | ErrorKind::Usage => 1,
                ErrorKind::Numerics => 2,
                ErrorKind::Resource => 3,
            },
            _ => 1,
        }
    }
}
