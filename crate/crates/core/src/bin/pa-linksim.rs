fn main() {
    std::process::exit(pa_linksim::cli::run(std::env::args_os()));
}
