//! Library side of the `kstab` binary: descriptors, commands and reports.

pub mod commands;
pub mod descriptor;
pub mod error;
pub mod report;

pub use commands::{cmd_convert, cmd_eval, cmd_p2wb_sweep, cmd_verify, ConvertFrom, EvalOptions};
pub use descriptor::PairDescriptor;
pub use error::{CliError, Result};
pub use report::RunReport;
