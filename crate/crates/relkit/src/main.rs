use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(relkit::cli::main_with_std())
}
