fn main() -> std::process::ExitCode {
    bisim_matrix::cli::main()
}
