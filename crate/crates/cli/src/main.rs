fn main() {
    std::process::exit(quanthelly_cli::run(std::env::args()));
}
