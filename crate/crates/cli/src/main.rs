fn main() {
    std::process::exit(bwspin_cli::main_with_args(std::env::args_os()));
}
