fn main() {
    std::process::exit(spreadforge::cli::main());
}
