fn main() {
    std::process::exit(fraclap::cli::run(std::env::args().collect()));
}
