fn main() {
    env_logger::init();
    repx::cli::configure_threads();
    let code = repx::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
