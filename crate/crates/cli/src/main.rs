use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use grpgeo_cli::commands::{run, Cli};
use grpgeo_cli::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.body).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                }),
                None => std::io::stdout()
                    .write_all(out.body.as_bytes())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    }),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
