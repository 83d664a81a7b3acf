fn main() {
    std::process::exit(shqa_cli::run_cli(std::env::args_os()));
}
