fn main() {
    std::process::exit(zpfaff::cli::main_with_env());
}
