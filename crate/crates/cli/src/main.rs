use std::io::Write;
use std::process::ExitCode;

use tritangle_cli::config::wants_help;
use tritangle_cli::{parse_args, run, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("tritangle: {e}");
    eprintln!("{}", e.machine_line());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    if let Some(help) = wants_help(&argv) {
        help.exit();
    }
    let cfg = match parse_args(&argv) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e),
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = run(&cfg, &mut lock);
    let _ = lock.flush();
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => fail(&e),
    }
}
