fn main() {
    std::process::exit(floquet_forge::cli::run_from(std::env::args_os()));
}
