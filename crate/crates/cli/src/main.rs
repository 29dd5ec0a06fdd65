use std::io::Write;

fn main() {
    let outcome = supercomb_cli::run();
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code);
}
