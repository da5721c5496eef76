use std::process::ExitCode;

use clap::Parser;
use degchain_cli::{run, write_report, Cli, CliError, Format, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = cli.command.split();
    let result = RunConfig::resolve(command, flags).and_then(|cfg| {
        let report = run(&cfg)?;
        write_report(&cfg, &report)?;
        // CSV carries only the table; the summary goes to stderr.
        if cfg.format == Format::Csv && !report.summary.is_null() {
            eprintln!("{}", report.summary);
        }
        match report.threshold_failure {
            Some(msg) => Err(CliError::Threshold(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("degchain: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
