use clap::Parser;

fn main() {
    let cli = bgtail_cli::Cli::parse();
    let code = bgtail_cli::run(cli, &mut std::io::stdout());
    std::process::exit(code);
}
