fn main() {
    std::process::exit(trilat::cli::run(std::env::args_os()));
}
