fn main() {
    std::process::exit(bricard_kit::cli::run());
}
