fn main() {
    std::process::exit(fuzzyrb::cli::main_with_args(std::env::args_os()));
}
