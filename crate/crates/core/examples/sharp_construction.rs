//! The apex construction: one corner point sees every cross pair of two
//! antidiagonal rows, so the count grows quadratically.

use dotpairs::constructions::sharp_set;
use dotpairs::counting::incidence_profile;
use dotpairs::{DotPair, Rational};

fn main() -> dotpairs::Result<()> {
    let alpha = Rational::one();
    let beta = Rational::new(3, 2);
    let pair = DotPair::new(alpha.clone(), beta.clone());

    println!("{:>5} {:>10} {:>10}", "n", "triples", "apex only");
    for n in [11u64, 51, 101, 201, 401] {
        let set = sharp_set(n, &alpha, &beta)?;
        let triples = incidence_profile(&set, &pair).total_triples;
        let apex = ((n - 1) / 2) * (n / 2);
        println!("{n:>5} {triples:>10} {apex:>10}");
    }
    Ok(())
}
