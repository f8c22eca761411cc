fn main() {
    std::process::exit(sublinear_lab::cli::run(std::env::args_os()));
}
