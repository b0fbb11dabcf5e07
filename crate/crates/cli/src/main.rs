use std::io::IsTerminal;
use std::process::ExitCode;

use aquameter_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let terminal = stdout.is_terminal();
    let code = run(&cli, &mut stdout.lock(), &mut std::io::stderr(), terminal);
    ExitCode::from(code as u8)
}
