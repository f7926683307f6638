fn main() {
    std::process::exit(pmeans::cli::run(std::env::args_os()));
}
