//! Acceptance run: every verification suite with its time budget.
//!
//! Prints one line per criterion and exits non-zero if any suite fails or
//! runs over budget.

use std::process::ExitCode;
use std::time::Duration;

use triple_eis::verify::{run_suite, Suite, VerifyOptions};

const CRITERIA: [(u32, Suite, &str, u64); 8] = [
    (1, Suite::Siegel, "Siegel series against the lattice-count oracle", 600),
    (2, Suite::Interpolation, "family specialization against classical coefficients", 300),
    (3, Suite::Archimedean, "combinatorial and archimedean identities", 300),
    (4, Suite::FunctionalEquation, "local functional equation and degeneration table", 60),
    (5, Suite::Whittaker, "degenerate Whittaker values", 120),
    (6, Suite::TrivialZero, "trivial-zero classification", 60),
    (7, Suite::Tate, "Tate period round trip and L-invariant", 60),
    (8, Suite::RootNumber, "root numbers from local factors", 60),
];

fn main() -> ExitCode {
    let options = VerifyOptions::default();
    let mut all_passed = true;
    for (id, suite, title, budget) in CRITERIA {
        let report = run_suite(suite, &options);
        let in_budget = Duration::from_secs_f64(report.seconds) <= Duration::from_secs(budget);
        let ok = report.passed() && in_budget;
        all_passed &= ok;
        println!(
            "criterion {id} [{suite}] {}: {title}: {} checks, {} failed, {:.1}s of {budget}s",
            if ok { "PASS" } else { "FAIL" },
            report.checks,
            report.failed,
            report.seconds,
        );
        for failure in &report.failures {
            println!("    {failure}");
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
