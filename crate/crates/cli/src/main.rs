fn main() {
    std::process::exit(semigroupoid_cli::run(std::env::args_os()));
}
