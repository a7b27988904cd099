fn main() {
    std::process::exit(fracstoch::cli::run(std::env::args_os()));
}
