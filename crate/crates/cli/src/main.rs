fn main() {
    std::process::exit(skewmst_cli::run(std::env::args_os()));
}
