fn main() {
    std::process::exit(extreme_ec::experiments::cli::run(std::env::args_os()));
}
