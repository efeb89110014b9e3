use clap::Parser;
use h2xr_cli::config::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = h2xr_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
