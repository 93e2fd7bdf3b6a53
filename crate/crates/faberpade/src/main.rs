fn main() {
    std::process::exit(faberpade::cli::run_main());
}
