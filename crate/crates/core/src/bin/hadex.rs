fn main() {
    std::process::exit(hadex::cli::main_with_args(std::env::args_os()));
}
