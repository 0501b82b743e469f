fn main() {
    std::process::exit(s1s_tool::cli::main());
}
