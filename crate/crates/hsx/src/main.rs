fn main() -> std::process::ExitCode {
    hsx::cli::main()
}
