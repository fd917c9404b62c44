fn main() {
    std::process::exit(dressed_auger::cli::run(std::env::args_os()));
}
