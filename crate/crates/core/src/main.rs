fn main() {
    std::process::exit(unshred::cli::run(std::env::args_os()));
}
