//! Separation and Riesz energy for grids and jittered grids.

use dotpairs::adaptability::{is_s_adaptable, DEFAULT_ENERGY_THRESHOLD};
use dotpairs::constructions::{grid_set, perturbed_grid, random_set};
use dotpairs::Rational;

fn main() -> dotpairs::Result<()> {
    let s = Rational::new(7, 4);
    let sets = [
        ("grid", grid_set(400)?),
        ("perturbed grid", perturbed_grid(400, &s, 11)?),
        ("uniform random", random_set(400, 11)?),
    ];
    println!("s = {s}, energy threshold {DEFAULT_ENERGY_THRESHOLD}");
    for (name, set) in &sets {
        let report = is_s_adaptable(set, &s, DEFAULT_ENERGY_THRESHOLD)?;
        println!(
            "{name:>15}: min |p-q|^2 = {:.3e} (need {:.3e}) {}, energy {:.3} {}",
            report.min_sq_separation.to_f64(),
            report.separation_target_sq,
            if report.separation_pass {
                "pass"
            } else {
                "FAIL"
            },
            report.energy,
            if report.energy_pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
