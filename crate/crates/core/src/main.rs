fn main() {
    std::process::exit(bigmds::cli::cli_main(std::env::args_os()));
}
