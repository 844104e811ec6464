fn main() -> std::process::ExitCode {
    tensortract::cli::main()
}
