fn main() {
    env_logger::init();
    let (code, text) = numera::cli::run(std::env::args_os());
    if code == 0 {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    std::process::exit(code);
}
