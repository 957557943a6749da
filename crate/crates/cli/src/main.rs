use std::process::ExitCode;

fn main() -> ExitCode {
    let args = std::env::args_os().collect();
    let code = lca_cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}
