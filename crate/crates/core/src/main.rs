fn main() {
    std::process::exit(srs::cli::run(std::env::args_os()));
}
