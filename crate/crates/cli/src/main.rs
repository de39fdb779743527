use std::process::ExitCode;

use skewshift_cli::{execute, parse_args, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match parse_args(std::env::args_os().collect()) {
        Ok(c) => c,
        Err(e) => {
            if let Some(clap_err) = e.downcast_ref::<clap::Error>() {
                // help and version land here too
                let _ = clap_err.print();
                return ExitCode::from(if clap_err.use_stderr() { EXIT_INPUT as u8 } else { 0 });
            }
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
