fn main() {
    std::process::exit(cdyn::cli::main());
}
