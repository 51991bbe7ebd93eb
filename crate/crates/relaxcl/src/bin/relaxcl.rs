use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;

fn main() -> anyhow::Result<ExitCode> {
    let outcome = relaxcl::cli::run_from(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(outcome.stdout.as_bytes()).context("writing to standard output")?;
    stdout.flush().context("flushing standard output")?;
    Ok(ExitCode::from(u8::try_from(outcome.code).unwrap_or(1)))
}
