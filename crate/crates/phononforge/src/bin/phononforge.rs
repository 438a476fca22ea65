use clap::Parser;

fn main() {
    let cli = phononforge::cli::Cli::parse();
    std::process::exit(phononforge::cli::run(cli));
}
