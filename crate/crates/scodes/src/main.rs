use clap::Parser;

fn main() {
    let cli = scodes::cli::Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = scodes::cli::run(cli, &mut stdout.lock()) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
