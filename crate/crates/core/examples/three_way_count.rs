//! The same count three ways: enumeration of all triples, per-point line
//! populations, and the A/B split of pairs `(q, r)`.

use dotpairs::constructions::random_set;
use dotpairs::counting::{count_bruteforce, count_via_ab, incidence_profile};
use dotpairs::geometry::dot;
use dotpairs::io::parse_points_str;
use dotpairs::DotPair;

fn main() -> dotpairs::Result<()> {
    let text = "\
# a small hand-made set
1,0
0,1
1,1
1/2,1/2
2,0
1/2,3/2
3/2,-1/2
";
    let set = parse_points_str(text, "inline")?;
    let pair = DotPair::new("1".parse()?, "2".parse()?);
    report("inline set", &set, &pair)?;

    let set = random_set(40, 7)?;
    let pts = set.points();
    // a realized pair, so the count is at least one
    let pair = DotPair::new(dot(&pts[0], &pts[1]), dot(&pts[0], &pts[2]));
    report("random set", &set, &pair)
}

fn report(label: &str, set: &dotpairs::PointSet, pair: &DotPair) -> dotpairs::Result<()> {
    let brute = count_bruteforce(set, pair);
    let profile = incidence_profile(set, pair);
    let split = count_via_ab(set, pair)?;
    println!(
        "{label}: n = {}, alpha = {}, beta = {}",
        set.len(),
        pair.alpha,
        pair.beta
    );
    println!("  brute force      {brute}");
    println!("  line populations {}", profile.total_triples);
    println!(
        "  A/B split        {} = {} (from {} A pairs) + {} (from {} B pairs)",
        split.total_triples(),
        split.triples_from_a,
        split.a_pairs,
        split.triples_from_b,
        split.b_pairs
    );
    Ok(())
}
