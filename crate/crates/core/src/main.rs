use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match dotpairs::cli::parse_args(std::env::args_os()) {
        Ok(config) => config,
        Err(err) => return ExitCode::from(err.report()),
    };
    ExitCode::from(dotpairs::cli::run(&config))
}
