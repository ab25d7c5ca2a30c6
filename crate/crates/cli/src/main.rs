use std::process::ExitCode;

use clap::Parser;
use ergochan_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ergochan: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
