fn main() {
    std::process::exit(rulestd::cli::main_with_args(std::env::args_os()));
}
