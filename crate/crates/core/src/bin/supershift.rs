use clap::Parser;

fn main() {
    let args = supershift::cli::Args::parse();
    std::process::exit(supershift::cli::main_with_args(args));
}
