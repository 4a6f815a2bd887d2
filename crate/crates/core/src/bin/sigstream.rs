fn main() {
    std::process::exit(sigstream::cli::main_with(std::env::args_os()));
}
