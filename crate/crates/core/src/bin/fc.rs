fn main() {
    std::process::exit(fc_core::cli::dispatch(std::env::args_os()));
}
