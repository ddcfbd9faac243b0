fn main() {
    std::process::exit(tangle_kh::cli::main());
}
