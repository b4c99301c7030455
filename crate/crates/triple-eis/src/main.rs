fn main() {
    let code = triple_eis::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
