fn main() {
    std::process::exit(inverse_fracture::cli::run(std::env::args_os()));
}
