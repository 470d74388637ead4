use clap::Parser;
use std::io::{self, BufWriter, Write};
use std::process;

fn main() {
    let cli = hpdesign::cli::Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let status = hpdesign::cli::run(cli, &mut out);
    if let Err(err) = out.flush() {
        eprintln!("error: {err}");
        process::exit(2);
    }
    if let Err(err) = status {
        eprintln!("error: {err}");
        process::exit(err.exit_code());
    }
}
