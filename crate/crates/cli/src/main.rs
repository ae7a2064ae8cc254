fn main() {
    std::process::exit(predform_cli::run_cli(std::env::args_os()));
}
