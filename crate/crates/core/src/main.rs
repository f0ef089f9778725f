use std::io;
use std::process::ExitCode;

use somali_lemma::cli;

fn main() -> ExitCode {
    let code = cli::run(
        std::env::args_os(),
        &cli::default_data_dir(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
