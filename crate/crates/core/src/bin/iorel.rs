fn main() -> std::process::ExitCode {
    iorel::cli::main_entry()
}
