fn main() {
    std::process::exit(entkit::cli::main());
}
