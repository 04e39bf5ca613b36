fn main() {
    std::process::exit(wrlat_cli::run());
}
