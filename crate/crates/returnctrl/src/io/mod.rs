//! Run configuration, result persistence, plot scripts and the command-line
//! front end.

pub mod cli;
pub mod config;
pub mod fields;
pub mod plot;

pub use cli::{execute, main_with_args, resolve_config, sine_data, Cli, CliCommand, THREADS_ENV};
pub use config::{Command, RunConfig};
pub use fields::{
    read_field_binary, read_field_csv, read_field_header, write_field_binary, write_field_csv, FieldHeader, ScalarKind,
};
