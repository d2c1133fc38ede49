fn main() -> std::process::ExitCode {
    dswlab::cli::main()
}
