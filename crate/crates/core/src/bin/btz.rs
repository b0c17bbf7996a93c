fn main() {
    std::process::exit(block_toeplitz::cli::main_with(std::env::args_os()));
}
