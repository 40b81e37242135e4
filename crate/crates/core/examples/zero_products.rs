//! Orthogonal axes: with both targets zero every axis point pairs with any
//! two points of the other axis, giving cubic growth.

use dotpairs::constructions::zero_set;
use dotpairs::counting::{count_bruteforce, incidence_profile};
use dotpairs::{DotPair, Rational};

fn main() -> dotpairs::Result<()> {
    let pair = DotPair::new(Rational::zero(), Rational::zero());
    for n in [4u64, 8, 16, 32, 64] {
        let set = zero_set(n)?;
        let quick = incidence_profile(&set, &pair).total_triples;
        let brute = if n <= 32 {
            count_bruteforce(&set, &pair).to_string()
        } else {
            "-".into()
        };
        println!(
            "n = {n:>3}: triples = {quick:>6} (brute force {brute}), 2(n/2)^3 = {}",
            2 * (n / 2).pow(3)
        );
    }
    Ok(())
}
