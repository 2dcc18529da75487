use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match cmg::cli::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        // help and version output
        Err(cmg::Error::Config(msg)) if msg.is_empty() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
