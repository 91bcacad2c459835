fn main() {
    std::process::exit(fpgft::cli::run_from_env());
}
