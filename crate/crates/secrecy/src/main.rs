fn main() {
    std::process::exit(secrecy::cli::run(std::env::args_os()));
}
