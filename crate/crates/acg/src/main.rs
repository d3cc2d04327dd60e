fn main() {
    std::process::exit(acg::cli::run(std::env::args_os()));
}
