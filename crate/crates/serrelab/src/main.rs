fn main() {
    std::process::exit(serrelab::run(std::env::args_os()));
}
