use clap::Parser;
use std::process::ExitCode;

use spectral_fft::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(&Cli::parse()))
}
