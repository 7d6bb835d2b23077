fn main() {
    std::process::exit(bireg_cli::main_with_env());
}
