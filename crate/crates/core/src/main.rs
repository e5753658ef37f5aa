use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let out_path = argv
        .windows(2)
        .find(|w| w[0] == "--out")
        .map(|w| w[1].clone());
    let inv = nullcone::cli::run(argv);
    if !inv.stderr.is_empty() {
        eprint!("{}", inv.stderr);
    }
    match out_path {
        Some(path) if !inv.stdout.is_empty() => {
            if let Err(e) = std::fs::write(&path, &inv.stdout) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(nullcone::cli::EXIT_FAILED as u8);
            }
        }
        _ => {
            let _ = std::io::stdout().write_all(inv.stdout.as_bytes());
        }
    }
    ExitCode::from(inv.code as u8)
}
