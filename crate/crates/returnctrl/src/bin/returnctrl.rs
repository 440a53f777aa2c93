fn main() {
    std::process::exit(returnctrl::io::main_with_args(std::env::args_os()));
}
