fn main() {
    std::process::exit(bifilter::cli::run(std::env::args_os()));
}
