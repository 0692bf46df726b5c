use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut code = efrac_cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    if out.flush().is_err() && code == 0 {
        code = efrac_cli::error::exit::IO;
    }
    ExitCode::from(code as u8)
}
