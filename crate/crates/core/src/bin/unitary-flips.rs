fn main() {
    std::process::exit(unitary_flips::cli::run(std::env::args_os()));
}
