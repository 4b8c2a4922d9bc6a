fn main() {
    std::process::exit(qchaos::cli::run(std::env::args_os()));
}
