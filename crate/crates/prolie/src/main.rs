use std::io::Write;
use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let seed = std::env::var("PROLIE_SEED").ok();
    let outcome = panic::catch_unwind(|| prolie::cli::run(&args, seed.as_deref()));
    match outcome {
        Ok(o) => {
            let _ = std::io::stdout().write_all(o.stdout.as_bytes());
            let _ = std::io::stderr().write_all(o.stderr.as_bytes());
            ExitCode::from(o.code as u8)
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(3)
        }
    }
}
