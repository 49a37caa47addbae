fn main() {
    std::process::exit(analog_search_lab::run_main(std::env::args_os()));
}
