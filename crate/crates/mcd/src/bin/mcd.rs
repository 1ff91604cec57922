fn main() {
    std::process::exit(mcd::cli::dispatch(std::env::args_os()));
}
