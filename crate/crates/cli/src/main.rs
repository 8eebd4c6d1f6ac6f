use std::process::ExitCode;
use std::time::Duration;

use apart_cli::commands::{Cli, Command, EXIT_INPUT};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if let Command::Serve(args) = &cli.command {
        let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match runtime.block_on(apart_cli::server::serve(args.port, Duration::from_secs(args.ttl))) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT as u8)
            }
        };
    }
    let out = apart_cli::run(&cli.command);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.exit as u8)
}
