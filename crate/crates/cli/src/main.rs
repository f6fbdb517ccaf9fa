fn main() {
    std::process::exit(qcwfa_cli::main_with_args(std::env::args_os()));
}
