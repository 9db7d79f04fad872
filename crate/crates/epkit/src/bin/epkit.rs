fn main() { std::process::exit(epkit::cli::run(std::env::args())) }
