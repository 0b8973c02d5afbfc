use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let (code, report) = linord::cli::run_command(&argv);
    if code == 1 {
        eprintln!("{report}");
    } else {
        println!("{report}");
    }
    ExitCode::from(code as u8)
}
