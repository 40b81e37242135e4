//! Perturbed grids at separation `n^(-1/s)`: implied constants of the
//! separated-set bound and their trend, written as JSON and CSV.

use dotpairs::experiments::run_separation_experiment;
use dotpairs::{DotPair, Rational};

fn main() -> dotpairs::Result<()> {
    let s: Rational = std::env::args().nth(1).as_deref().unwrap_or("2").parse()?;
    let pair = DotPair::new(Rational::one(), Rational::one());
    let report = run_separation_experiment(&[256, 1024, 4096], &s, &pair, 7)?;
    print!("{}", report.rows_csv());
    for check in &report.bound_checks {
        let kind = if check.asserted {
            "asserted"
        } else {
            "reported"
        };
        println!(
            "[{kind}] {}: {} ({})",
            check.name,
            if check.passed { "pass" } else { "FAIL" },
            check.detail
        );
    }
    for warning in &report.warnings {
        println!("warning: {warning}");
    }
    Ok(())
}
