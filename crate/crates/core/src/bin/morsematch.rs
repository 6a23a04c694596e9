fn main() {
    std::process::exit(morsematch::cli::run(std::env::args_os()));
}
