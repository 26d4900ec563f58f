use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use eqdec_cli::commands::{self, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            report.timing_ms = Some(start.elapsed().as_millis() as u64);
            let rendered = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            print!("{rendered}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("eqdec: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("eqdec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
