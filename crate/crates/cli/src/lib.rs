//! `numcli`: seeded command-line demos over `desk-numerics`.
//!
//! Exit codes: 0 on success, 1 for usage errors and unreadable input, 2 when
//! a numerical routine fails. Error messages name the failure, e.g.
//! `Unstable: the scheme is unstable (...)`.

pub mod commands;
pub mod csv_io;
pub mod error;
pub mod pgm;
pub mod registry;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{Cli, Output};
pub use csv_io::{read_csv, read_matrix_csv, write_csv, write_matrix_csv, Table};
pub use error::{CliError, CliResult};
pub use pgm::{read_pgm, write_pgm};

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write) -> CliResult<()> {
    let bytes = match out {
        Output::Csv(t) => write_csv(&t)?,
        Output::Matrix(m) => write_matrix_csv(&m)?,
        Output::Pgm(main, extra) => {
            if let Some((path, bytes)) = extra {
                std::fs::write(path, bytes)?;
            }
            main
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

/// Runs one invocation; `args` includes the program name.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match commands::execute(&cli).and_then(|out| emit(&cli, out, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
