use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env = hytet_cli::Env::from_process();
    let code = hytet_cli::run(
        std::env::args_os(),
        &env,
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
