fn main() {
    std::process::exit(blowuplab_cli::run(std::env::args_os()));
}
