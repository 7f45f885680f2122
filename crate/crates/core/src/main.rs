fn main() {
    let code = eigmap::cli::run_command(std::env::args_os().skip(1), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
