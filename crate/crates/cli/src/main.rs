use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use motzeta_cli::input::CORPUS_ENV;
use motzeta_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let corpus_dir = std::env::var_os(CORPUS_ENV).map(Into::into);
    let outcome = run(&cli.into_config(corpus_dir));
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
