fn main() {
    std::process::exit(mecip::cli::run(std::env::args_os()));
}
