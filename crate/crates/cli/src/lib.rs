//! Command-line front end for `olct-core`: file formats, run configuration and the
//! `olct` subcommands.

pub mod cli;
pub mod config;
pub mod io;

pub use cli::run;
pub use config::RunConfig;
pub use io::{read_signal, read_spectrum, write_signal, write_spectrum, IoError, SignalFile};
