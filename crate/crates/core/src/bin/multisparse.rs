fn main() {
    std::process::exit(multisparse::cli::cli_main(std::env::args_os()));
}
