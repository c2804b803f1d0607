fn main() {
    std::process::exit(dirichlet_eigen::cli::run(std::env::args_os()));
}
