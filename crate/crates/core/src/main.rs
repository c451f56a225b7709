use std::io;
use std::process::ExitCode;

use cornerforge::cli::{self, EXIT_USAGE};

fn main() -> ExitCode {
    match cli::thread_count_from_env() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: cannot configure thread pool: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
