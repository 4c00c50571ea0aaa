fn main() {
    std::process::exit(rsset::cli::main());
}
