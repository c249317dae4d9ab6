fn main() {
    std::process::exit(grassmetric_cli::main_with_args(std::env::args_os()));
}
