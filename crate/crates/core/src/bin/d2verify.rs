fn main() {
    std::process::exit(metacyclic_d2::cli::run(std::env::args_os()));
}
