fn main() {
    std::process::exit(lqlab_cli::run(std::env::args().collect()));
}
