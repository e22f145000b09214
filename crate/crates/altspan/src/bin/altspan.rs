fn main() {
    std::process::exit(altspan::cli::main_with(std::env::args_os()));
}
