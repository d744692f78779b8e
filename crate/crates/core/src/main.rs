use std::process::ExitCode;

fn main() -> ExitCode {
    match gyrator::cli::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.code == 0 {
                print!("{e}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code)
        }
    }
}
