fn main() {
    env_logger::init();
    std::process::exit(viewtree::cli::run(std::env::args_os()));
}
