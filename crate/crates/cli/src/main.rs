fn main() {
    std::process::exit(epr_sim::run(std::env::args_os().skip(1)));
}
