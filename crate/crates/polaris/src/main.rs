fn main() {
    std::process::exit(polaris::cli::main_with(std::env::args_os()));
}
