//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Runs in a plain `main` so the lines are printed even when every
//! criterion passes.

use braceflow::selftest::{self, Options, CRITERIA};

fn main() {
    let opts = Options::default();
    let mut failed = 0;
    for c in CRITERIA {
        let outcome = selftest::run(c.id, &opts);
        for check in outcome.report.failures() {
            println!("    {check}");
        }
        println!("{}", outcome.line());
        if !outcome.passed() {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
