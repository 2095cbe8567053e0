fn main() {
    std::process::exit(cyclohom::cli::run(std::env::args_os()));
}
