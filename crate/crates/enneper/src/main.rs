use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match enneper::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let kind = e.kind().to_string();
            eprintln!(
                "{{\"error\":{{\"kind\":\"usage\",\"message\":\"{}\"}}}}",
                kind.replace('\\', "\\\\").replace('"', "\\\"")
            );
            return ExitCode::from(enneper::cli::EXIT_USAGE);
        }
    };
    ExitCode::from(enneper::cli::run(cli))
}
