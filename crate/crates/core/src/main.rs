fn main() {
    std::process::exit(thermofield::cli::main_with_args(std::env::args_os()));
}
