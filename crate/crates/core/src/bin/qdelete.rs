fn main() {
    std::process::exit(qdelete::harness::main_entry());
}
