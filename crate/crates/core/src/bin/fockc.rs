fn main() {
    std::process::exit(fockc::cli::main_with_args(std::env::args_os()));
}
