fn main() {
    std::process::exit(bimono::cli::run());
}
