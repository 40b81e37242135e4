//! Fits growth exponents of the count over three construction families.

use dotpairs::constructions::ConstructionSpec;
use dotpairs::experiments::run_scaling;
use dotpairs::{DotPair, Rational};

fn main() -> dotpairs::Result<()> {
    let one = Rational::one();
    let three_halves = Rational::new(3, 2);
    let runs = [
        (
            ConstructionSpec::sharp(0, one.clone(), three_halves.clone()),
            vec![101, 201, 401, 801],
            DotPair::new(one.clone(), three_halves),
        ),
        (
            ConstructionSpec::zero(0),
            vec![8, 16, 32, 64],
            DotPair::new(Rational::zero(), Rational::zero()),
        ),
        (
            ConstructionSpec::grid(0),
            vec![64, 256, 1024, 4096],
            DotPair::new(one.clone(), one),
        ),
    ];
    for (family, sizes, pair) in runs {
        let report = run_scaling(&family, &sizes, &pair)?;
        let counts: Vec<u64> = report.rows.iter().map(|r| r.triples).collect();
        println!(
            "{:>6}: counts {:?}, exponent {:?}, asserted checks {}",
            family.kind.to_string(),
            counts,
            report.fitted_exponent,
            if report.asserted_checks_pass() {
                "pass"
            } else {
                "FAIL"
            }
        );
    }
    Ok(())
}
