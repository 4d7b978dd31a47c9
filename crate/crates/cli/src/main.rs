fn main() {
    let (code, out) = derivcert_cli::run_command(std::env::args_os());
    if code == derivcert_cli::EXIT_USAGE {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
