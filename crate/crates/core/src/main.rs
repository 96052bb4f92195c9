fn main() {
    std::process::exit(kdvbbm::cli::main_with_args(std::env::args_os()));
}
