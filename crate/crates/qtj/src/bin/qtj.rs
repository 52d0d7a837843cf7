fn main() {
    std::process::exit(qtj::cli::run_from_env());
}
