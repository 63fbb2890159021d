use clap::Parser;

fn main() {
    let cli = bridgesift::cli::Cli::parse();
    if let Err(e) = bridgesift::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
