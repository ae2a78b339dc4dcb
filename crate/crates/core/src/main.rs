fn main() {
    std::process::exit(toroidal_bosons::cli::cli_main());
}
