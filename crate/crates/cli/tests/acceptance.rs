//! Acceptance criteria replayed on the bundled corpus, one line per criterion.

use std::process::ExitCode;

use inception_cli::corpus::{default_root, Corpus};
use inception_cli::selftest::{run, Config};

fn main() -> ExitCode {
    let corpus = Corpus::load(&default_root()).expect("bundled corpus loads");
    let cfg = Config::default();
    let mut failed = 0;
    for id in 1..=8 {
        let outcome = run(id, &corpus, &cfg);
        println!("{outcome}");
        if !outcome.passed() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
