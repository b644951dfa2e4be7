fn main() {
    std::process::exit(qtanner_sim::cli::run(std::env::args_os()));
}
