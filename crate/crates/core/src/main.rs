fn main() {
    std::process::exit(wnk::cli::main());
}
