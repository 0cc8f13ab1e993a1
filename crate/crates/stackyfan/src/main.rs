use std::io::{stderr, stdout};

fn main() {
    let code = stackyfan::cli::run(std::env::args(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
