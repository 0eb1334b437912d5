use std::process::ExitCode;

fn main() -> ExitCode {
    entlab::cli::main()
}
