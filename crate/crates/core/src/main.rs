fn main() {
    std::process::exit(bpkcnm::cli::main_with_args(std::env::args_os()));
}
