fn main() {
    std::process::exit(bobmpc::cli::main_with(std::env::args_os()));
}
