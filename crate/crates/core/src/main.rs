fn main() {
    std::process::exit(goldfish::cli::run());
}
