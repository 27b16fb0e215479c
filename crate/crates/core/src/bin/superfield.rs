fn main() {
    std::process::exit(superfield::cli::run(std::env::args_os()));
}
