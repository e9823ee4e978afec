use std::process::ExitCode;

fn main() -> ExitCode {
    chh::cli::main_with_args(std::env::args_os())
}
