fn main() {
    std::process::exit(trpca::cli::run(std::env::args_os()));
}
