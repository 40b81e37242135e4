//! Dyadic bucketing of line populations on a separated grid, with the
//! bracket identities and the per-line capacity check.

use dotpairs::adaptability::min_separation_sq;
use dotpairs::constructions::grid_set;
use dotpairs::counting::incidence_profile;
use dotpairs::incidence::{
    check_dyadic_identities, check_line_capacity, dyadic_decompose_separated,
};
use dotpairs::{DotPair, Rational};

fn main() -> dotpairs::Result<()> {
    let set = grid_set(256)?;
    let pair = DotPair::new(Rational::one(), Rational::new(1, 2));
    let eps_sq = min_separation_sq(&set)?;
    let profile = incidence_profile(&set, &pair);
    let stats = dyadic_decompose_separated(&profile, &eps_sq);

    println!("grid of {} points, squared separation {eps_sq}", set.len());
    for b in stats.bucket_list() {
        println!("  P[{:>2},{:>2}] = {}", b.j, b.k, b.count);
    }
    let ids = check_dyadic_identities(&stats, &profile);
    println!(
        "incidences {} in [{}, {}), triples {} in [{}, {})",
        ids.incidences,
        ids.incidences_lower,
        2 * ids.incidences_lower,
        ids.triples,
        ids.triples_lower,
        4 * ids.triples_lower
    );
    let cap = check_line_capacity(&set, &pair, &eps_sq)?;
    println!(
        "fullest lines: alpha {}, beta {}; capacity {} -> {}",
        cap.max_alpha,
        cap.max_beta,
        cap.capacity,
        if cap.passed { "ok" } else { "exceeded" }
    );
    Ok(())
}
