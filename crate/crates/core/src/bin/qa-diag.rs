fn main() {
    std::process::exit(qa_diag::cli::run(std::env::args_os()));
}
