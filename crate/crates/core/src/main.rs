use clap::Parser;

fn main() {
    let cli = sepath::cli::Cli::parse();
    std::process::exit(sepath::cli::run(cli));
}
