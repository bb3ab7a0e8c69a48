//! Signal files, run configuration and result tables.

mod config;
mod csv;
mod signal_file;

pub use config::RunConfig;
pub use csv::{format_sig9, format_sweep_csv, write_sweep_csv, SWEEP_HEADER};
pub use signal_file::{format_signal, parse_signal_text, read_signal_file, write_signal_file};
