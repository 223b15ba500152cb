fn main() {
    std::process::exit(sensecast_cli::main_with_args(std::env::args_os()));
}
