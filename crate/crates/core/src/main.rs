use std::process::ExitCode;

fn main() -> ExitCode {
    twsense::cli::main_entry()
}
