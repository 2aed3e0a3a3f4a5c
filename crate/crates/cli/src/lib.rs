//! Command-line front end for `apfire-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod doc;
pub mod output;
pub mod props;
pub mod schedule;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{Cli, Failure};

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = commands::Io { out, err };
    match commands::execute(cli, &mut io) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

/// Caps the rayon pool at `APFIRE_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("APFIRE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
