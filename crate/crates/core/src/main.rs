fn main() {
    let (code, out) = gpde::cli::run(std::env::args_os());
    if code == 2 {
        eprintln!("{out}");
    } else {
        print!("{out}");
        if !out.ends_with('\n') {
            println!();
        }
    }
    std::process::exit(code);
}
