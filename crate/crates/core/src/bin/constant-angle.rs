fn main() {
    std::process::exit(constant_angle::cli::run(std::env::args_os()));
}
