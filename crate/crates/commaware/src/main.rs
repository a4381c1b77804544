fn main() {
    std::process::exit(commaware::cli::run(std::env::args_os()));
}
