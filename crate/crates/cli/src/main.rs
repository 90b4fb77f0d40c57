use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    ncf_cli::configure_threads();
    let argv: Vec<_> = std::env::args_os().collect();
    let out = match ncf_cli::parse_args(&argv) {
        Ok(spec) => ncf_cli::run(&spec),
        Err(e) => ncf_cli::parse_error_outcome(&argv, &e),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
