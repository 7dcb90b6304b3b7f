fn main() {
    std::process::exit(padic_albanese::cli::run(std::env::args_os()));
}
