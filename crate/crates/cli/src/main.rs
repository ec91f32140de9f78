fn main() {
    std::process::exit(numcli::run());
}
