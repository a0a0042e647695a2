use clap::Parser;

fn main() {
    env_logger::init();
    let cli = khlee::cli::Cli::parse();
    let (code, out) = khlee::cli::run(&cli);
    print!("{out}");
    std::process::exit(code);
}
