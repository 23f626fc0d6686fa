use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use gibbs_cli::report::Timing;
use gibbs_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli, argv[1..].to_vec()).and_then(|outcome| {
        if let (Some(path), Some(bytes)) = (&cli.global.out, &outcome.csv) {
            std::fs::write(path, bytes)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        }
        Ok(outcome)
    }) {
        Ok(outcome) => {
            let timing = Timing { wall_seconds: start.elapsed().as_secs_f64() };
            // a closed pipe is not an error of the computation
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.report.render(&timing));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gibbs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
