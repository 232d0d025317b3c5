fn main() {
    std::process::exit(braceflow::cli::run_from(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
    ));
}
