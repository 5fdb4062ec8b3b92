use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (report, code) = semiform::cli::run_command(&argv);
    println!("{}", report.rendered());
    ExitCode::from(code as u8)
}
