//! Experiment driver for `unitdist-core`: subcommands, experiment configs
//! and file formats behind the `udlab` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod fit;
pub mod io;

pub use commands::{Failure, Outcome};
pub use error::{LabError, Result};

/// Writes an outcome's files, then prints its stdout document.
pub fn emit(outcome: &Outcome) -> Result<()> {
    for (path, contents) in &outcome.files {
        io::write_file(path, contents)?;
    }
    if let Some(s) = &outcome.stdout {
        print!("{s}");
    }
    Ok(())
}
