fn main() {
    std::process::exit(confine_cli::main_with(std::env::args_os()));
}
