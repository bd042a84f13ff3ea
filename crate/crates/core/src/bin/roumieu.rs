fn main() {
    std::process::exit(roumieu::cli::main_with(std::env::args_os()));
}
