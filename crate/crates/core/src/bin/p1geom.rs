fn main() {
    std::process::exit(p1geom::cli::run());
}
