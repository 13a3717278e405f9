fn main() {
    std::process::exit(fano_instantons::cli::run(std::env::args_os()));
}
