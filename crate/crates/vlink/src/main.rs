use clap::Parser;
use vlink::cli::{main_with, Cli};

fn main() {
    let cli = Cli::parse();
    let status = main_with(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(status);
}
