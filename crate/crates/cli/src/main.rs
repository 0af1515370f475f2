fn main() -> std::process::ExitCode {
    blaschke_cli::cli::run(std::env::args_os())
}
