fn main() {
    let (code, out) = transdim::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}
