use clap::Parser;

fn main() {
    let cli = selmer_cli::Cli::parse();
    if let Err(e) = selmer_cli::run(&cli) {
        eprintln!("selmer: {e}");
        std::process::exit(e.exit_code());
    }
}
