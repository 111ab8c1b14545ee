fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(symspace::cli::run(&argv));
}
