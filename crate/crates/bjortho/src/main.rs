fn main() {
    std::process::exit(bjortho::run_cli());
}
