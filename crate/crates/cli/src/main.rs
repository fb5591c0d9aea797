fn main() {
    std::process::exit(eee_cli::app::run(std::env::args_os()));
}
