fn main() {
    std::process::exit(ecs_cli::main_with_args(std::env::args_os()));
}
