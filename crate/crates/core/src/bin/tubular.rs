fn main() {
    std::process::exit(tubular::cli::main_with(std::env::args_os()));
}
