fn main() {
    std::process::exit(bisbm::cli::run(std::env::args_os()));
}
