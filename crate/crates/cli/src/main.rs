fn main() {
    std::process::exit(gase_cli::app::main_with_args(std::env::args_os()));
}
